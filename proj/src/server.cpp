#include "fseval/server.hpp"

#include "fseval/cli.hpp"
#include "fseval/csv.hpp"

#include "httplib.h"

#include <shared_mutex>

#include <sys/socket.h>

namespace fseval {

using nlohmann::json;

namespace {

constexpr const char* kFallbackPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>fseval results</title></head>
<body>
<h1>fseval results</h1>
<p>No dashboard assets were given (serve --assets DIR). The JSON API is live:</p>
<ul>
<li><a href="/api/manifest">/api/manifest</a></li>
<li>/api/curves?metric=&amp;experiment=</li>
<li>/api/fsdem?experiment=</li>
<li>/api/ranks?metric=&amp;experiment=&amp;stat=</li>
<li><a href="/api/timings">/api/timings</a></li>
<li><a href="/api/download/results">/api/download/results</a></li>
</ul>
</body></html>
)";

std::vector<std::string> exclude_param(const httplib::Request& req) {
  std::vector<std::string> values;
  const auto n = req.get_param_value_count("exclude");
  for (std::size_t i = 0; i < n; ++i) values.push_back(req.get_param_value("exclude", i));
  return split_names(values);
}

std::string required(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty())
    throw Error(std::string("missing query parameter: ") + name);
  return req.get_param_value(name);
}

std::optional<std::string> optional_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) return std::nullopt;
  return req.get_param_value(name);
}

RankQuery rank_query(const httplib::Request& req) {
  RankQuery q;
  q.metric = required(req, "metric");
  q.experiment = required(req, "experiment");
  q.stat = parse_rank_family(optional_param(req, "stat").value_or("standard"));
  if (auto a = optional_param(req, "alpha")) {
    const auto v = csv::parse_double(*a);
    if (!v) throw Error("alpha is not a number");
    q.alpha = *v;
  }
  q.exclude = exclude_param(req);
  return q;
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump() + "\n", "application/json");
}

void send_json(httplib::Response& res, const json& j) {
  res.set_content(j.dump(2) + "\n", "application/json");
}

}  // namespace

struct ResultsServer::Impl {
  httplib::Server http;
  mutable std::shared_mutex mutex;
  ResultsStore store;
  std::filesystem::path assets;

  // Runs fn against the store under a shared lock; Error becomes a 400.
  template <typename Fn>
  httplib::Server::Handler read(Fn fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        std::shared_lock lock(mutex);
        fn(store, req, res);
      } catch (const std::exception& e) {
        send_error(res, 400, e.what());
      }
    };
  }

  void routes() {
    http.Get("/api/manifest", read([](const ResultsStore& s, const auto&, auto& res) {
      send_json(res, manifest_json(s));
    }));
    http.Get("/api/curves", read([](const ResultsStore& s, const auto& req, auto& res) {
      send_json(res, curves_json(s, required(req, "metric"), required(req, "experiment"),
                                 optional_param(req, "dataset"), exclude_param(req)));
    }));
    http.Get("/api/fsdem", read([](const ResultsStore& s, const auto& req, auto& res) {
      send_json(res, fsdem_json(s, required(req, "experiment"), exclude_param(req)));
    }));
    http.Get("/api/ranks", read([](const ResultsStore& s, const auto& req, auto& res) {
      res.set_content(rank_report_json_text(compute_ranks(s, rank_query(req))), "application/json");
    }));
    http.Get("/api/timings", read([](const ResultsStore& s, const auto& req, auto& res) {
      std::optional<TimerAxis> axis;
      if (auto a = optional_param(req, "axis")) axis = parse_timer_axis(*a);
      send_json(res, timings_json(s, axis));
    }));
    http.Get("/api/export/latex", read([](const ResultsStore& s, const auto& req, auto& res) {
      const auto kind = optional_param(req, "kind").value_or("ranks");
      if (kind == "ranks") {
        res.set_content(format_latex(compute_ranks(s, rank_query(req))), "text/plain");
      } else if (kind == "fsdem") {
        res.set_content(fsdem_latex(s, required(req, "metric"), required(req, "experiment"),
                                    exclude_param(req)),
                        "text/plain");
      } else {
        throw Error("kind must be ranks or fsdem");
      }
    }));
    http.Get("/api/download/results", read([](const ResultsStore& s, const auto&, auto& res) {
      res.set_header("Content-Disposition", "attachment; filename=\"results.csv\"");
      res.set_content(format_results_csv(s.records), "text/csv");
    }));
    http.Get("/api/download/timings", read([](const ResultsStore& s, const auto&, auto& res) {
      if (s.timings.empty()) {
        send_error(res, 404, "no timings in this bundle");
        return;
      }
      res.set_header("Content-Disposition", "attachment; filename=\"timings.csv\"");
      res.set_content(format_timings_csv(s.timings), "text/csv");
    }));
    http.Post("/api/import", [this](const httplib::Request& req, httplib::Response& res) {
      std::unique_lock lock(mutex);
      // Work on a copy so a failure leaves the session untouched.
      ResultsStore next = store;
      ImportOutcome outcome;
      try {
        outcome = import_results(next, req.body);
      } catch (const std::exception& e) {
        send_error(res, 400, e.what());
        return;
      }
      store = std::move(next);
      json rejected = json::array();
      for (const auto& r : outcome.rejected) rejected.push_back({{"line", r.line}, {"reason", r.reason}});
      send_json(res, {{"accepted_rows", outcome.accepted}, {"rejected_rows", rejected}});
    });

    if (!assets.empty() && std::filesystem::is_directory(assets)) {
      http.set_mount_point("/", assets.string());
    } else {
      http.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kFallbackPage, "text/html");
      });
    }
  }
};

ResultsServer::ResultsServer(ResultsStore store, std::filesystem::path assets_dir)
    : impl_(std::make_unique<Impl>()) {
  // httplib's default adds SO_REUSEPORT, which would let a second server
  // share a busy port instead of failing.
  impl_->http.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  impl_->store = std::move(store);
  impl_->assets = std::move(assets_dir);
  impl_->routes();
}

ResultsServer::~ResultsServer() { stop(); }

int ResultsServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port))
    throw Error("cannot bind port " + std::to_string(port) + " (in use?)");
  return port;
}

void ResultsServer::listen() { impl_->http.listen_after_bind(); }

void ResultsServer::stop() {
  if (impl_) impl_->http.stop();
}

void ResultsServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

ResultsStore ResultsServer::snapshot() const {
  std::shared_lock lock(impl_->mutex);
  return impl_->store;
}

}  // namespace fseval
