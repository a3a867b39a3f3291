#pragma once

#include <memory>
#include <string>

#include "vstar/perception.hpp"
#include "vstar/wire.hpp"

namespace vstar {

struct RemoteOptions {
  int timeout_seconds = 30;
  /// Extra attempts after a failed round trip.
  int retries = 2;
};

/// Talks to a visual search model over the HTTP + JSON wire protocol.
/// Each call opens its own connection, so one instance is safe to share.
class RemoteBackend : public PerceptionBackend {
 public:
  /// `endpoint` is a base URL such as "http://127.0.0.1:8080".
  explicit RemoteBackend(std::string endpoint, RemoteOptions options = {});

  LocalizationResult locate_target(const TargetQuery& q) const override;
  std::string contextual_cue(const TargetQuery& q) const override;
  Heatmap locate_cue(const std::string& cue_text, const Rect& patch) const override;

 private:
  Json post(std::string_view path, const Json& body) const;
  LocalizationResult locate(const std::string& instruction, const Rect& patch) const;

  std::string endpoint_;
  RemoteOptions options_;
};

/// Server-side adapter: answers wire requests from any in-process backend.
/// Used to host the oracle behind the wire protocol for testing.
class WireResponder {
 public:
  explicit WireResponder(const PerceptionBackend& backend) : backend_(backend) {}

  wire::LocateResponse locate(const wire::LocateRequest& req) const;
  wire::CueResponse cue(const wire::CueRequest& req) const;

 private:
  const PerceptionBackend& backend_;
};

/// Minimal HTTP server exposing a WireResponder on 127.0.0.1.
class WireServer {
 public:
  explicit WireServer(const PerceptionBackend& backend);
  ~WireServer();
  WireServer(const WireServer&) = delete;
  WireServer& operator=(const WireServer&) = delete;

  /// Binds an ephemeral port and starts serving on a background thread.
  int start();
  void stop();
  std::string endpoint() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace vstar
