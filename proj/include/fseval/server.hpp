#pragma once

#include "fseval/analysis.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace fseval {

// Read-only JSON API over a results bundle. Imports are merged into an
// in-memory session copy; files on disk are never written.
class ResultsServer {
 public:
  explicit ResultsServer(ResultsStore store, std::filesystem::path assets_dir = {});
  ~ResultsServer();
  ResultsServer(const ResultsServer&) = delete;
  ResultsServer& operator=(const ResultsServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error when the
  // port cannot be bound.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  // Blocks until the listener accepts connections.
  void wait_until_ready() const;

  ResultsStore snapshot() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fseval
