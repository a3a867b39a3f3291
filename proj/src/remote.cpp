#include "vstar/remote.hpp"

#include <thread>

#include "httplib.h"
#include "vstar/error.hpp"

namespace vstar {

RemoteBackend::RemoteBackend(std::string endpoint, RemoteOptions options)
    : endpoint_(std::move(endpoint)), options_(options) {
  if (endpoint_.empty()) throw InvalidArgument("remote backend: empty endpoint");
  while (endpoint_.ends_with('/')) endpoint_.pop_back();
}

Json RemoteBackend::post(std::string_view path, const Json& body) const {
  const std::string payload = body.dump();
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    httplib::Client client(endpoint_);
    if (!client.is_valid()) throw TransportError("remote backend: invalid endpoint " + endpoint_);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);
    auto res = client.Post(std::string(path), payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw TransportError("remote backend: HTTP " + std::to_string(res->status));
    try {
      return Json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw TransportError(std::string("remote backend: unparsable response: ") + e.what());
    }
  }
  throw TransportError("remote backend: " + endpoint_ + std::string(path) + ": " + last_error);
}

LocalizationResult RemoteBackend::locate(const std::string& instruction, const Rect& patch) const {
  const Json reply = post(wire::kLocatePath, wire::encode(wire::LocateRequest{std::nullopt, patch, instruction}));
  wire::LocateResponse m;
  try {
    m = wire::decode_locate_response(reply);
  } catch (const DataError& e) {
    throw TransportError(std::string("remote backend: ") + e.what());
  }
  Heatmap cue(m.heatmap.width, m.heatmap.height, patch, std::move(m.heatmap.values));
  LocalizationResult r{m.box, m.box ? m.confidence : 0.0, {}, std::move(cue)};
  if (m.box) r.detections.push_back({*m.box, m.confidence});
  return r;
}

LocalizationResult RemoteBackend::locate_target(const TargetQuery& q) const {
  q.validate();
  return locate(wire::locate_instruction(q.name), q.patch);
}

std::string RemoteBackend::contextual_cue(const TargetQuery& q) const {
  q.validate();
  const Json reply = post(wire::kCuePath, wire::encode(wire::CueRequest{q.patch, wire::cue_instruction(q.name)}));
  try {
    return wire::decode_cue_response(reply).text;
  } catch (const DataError& e) {
    throw TransportError(std::string("remote backend: ") + e.what());
  }
}

Heatmap RemoteBackend::locate_cue(const std::string& cue_text, const Rect& patch) const {
  return locate(wire::locate_instruction(cue_text), patch).cue;
}

wire::LocateResponse WireResponder::locate(const wire::LocateRequest& req) const {
  const auto name = wire::parse_locate_instruction(req.instruction);
  if (!name) throw DataError("unrecognized locate instruction");
  wire::LocateResponse out;
  Heatmap cue = Heatmap::zeros(1, 1, req.patch);
  if (name->starts_with(kRegionPrefix) || *name == "fixation") {
    cue = backend_.locate_cue(*name, req.patch);
  } else {
    LocalizationResult r = backend_.locate_target(TargetQuery{*name, req.patch});
    out.box = r.box;
    out.confidence = r.confidence;
    cue = std::move(r.cue);
  }
  out.heatmap = {cue.width(), cue.height(), std::vector<double>(cue.values().begin(), cue.values().end())};
  return out;
}

wire::CueResponse WireResponder::cue(const wire::CueRequest& req) const {
  const auto name = wire::parse_cue_instruction(req.instruction);
  if (!name) throw DataError("unrecognized cue instruction");
  return {backend_.contextual_cue(TargetQuery{*name, req.patch})};
}

struct WireServer::Impl {
  explicit Impl(const PerceptionBackend& backend) : responder(backend) {}
  WireResponder responder;
  httplib::Server server;
  std::thread thread;
  int port = -1;
};

WireServer::WireServer(const PerceptionBackend& backend) : impl_(std::make_unique<Impl>(backend)) {
  auto handle = [this](auto&& fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      try {
        res.set_content(fn(Json::parse(req.body)).dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(e.what(), "text/plain");
      }
    };
  };
  impl_->server.Post(std::string(wire::kLocatePath), handle([this](const Json& j) {
    return wire::encode(impl_->responder.locate(wire::decode_locate_request(j)));
  }));
  impl_->server.Post(std::string(wire::kCuePath), handle([this](const Json& j) {
    return wire::encode(impl_->responder.cue(wire::decode_cue_request(j)));
  }));
}

WireServer::~WireServer() { stop(); }

int WireServer::start() {
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw TransportError("wire server: cannot bind");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void WireServer::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

std::string WireServer::endpoint() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

}  // namespace vstar
