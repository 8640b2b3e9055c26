//
// Copyright 2026 The mrcdata Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "httplib.h"
#include "mrcdata/annosvc.h"
#include "mrcdata/error.h"
#include "mrcdata/io.h"
#include "mrcdata/variant.h"

namespace mrcdata {

using json = nlohmann::json;

namespace {

constexpr const char* kJson = "application/json";

void SendJson(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void SendError(httplib::Response& res, int status, const std::string& error,
               const std::string& message = {}) {
  nlohmann::ordered_json body;
  body["error"] = error;
  if (!message.empty()) body["message"] = message;
  SendJson(res, status, body);
}

void SendResult(httplib::Response& res, const StoreResult& r) {
  switch (r.status) {
    case StoreStatus::kOk:
      SendJson(res, 200, TaskToJson(*r.task));
      return;
    case StoreStatus::kNotFound:
      SendError(res, 404, "not_found", r.message);
      return;
    case StoreStatus::kConflict:
      SendError(res, 409, "conflict", r.message);
      return;
    case StoreStatus::kUnprocessable: {
      nlohmann::ordered_json body;
      body["error"] = "invalid_revision";
      body["reason"] = RevisionReasonName(*r.reason);
      SendJson(res, 422, body);
      return;
    }
  }
}

}  // namespace

struct AnnotationServer::Impl {
  AnnotationStore& store;
  std::vector<QALabel> labels;
  ServerOptions options;
  httplib::Server http;

  Impl(AnnotationStore& s, std::vector<QALabel> l, ServerOptions o)
      : store(s), labels(std::move(l)), options(std::move(o)) {}

  void Routes();
};

void AnnotationServer::Impl::Routes() {
  http.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (!options.token.empty() && req.get_header_value("X-Annotation-Token") != options.token) {
      SendError(res, 401, "unauthorized");
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });

  http.Get("/api/tasks", [this](const httplib::Request& req, httplib::Response& res) {
    std::optional<TaskStatus> status;
    std::optional<int> limit;
    if (req.has_param("status") && !req.get_param_value("status").empty()) {
      status = ParseTaskStatus(req.get_param_value("status"));
      if (!status) {
        SendError(res, 400, "bad_request", "unknown status");
        return;
      }
    }
    if (req.has_param("limit") && !req.get_param_value("limit").empty()) {
      try {
        limit = std::stoi(req.get_param_value("limit"));
      } catch (const std::exception&) {
        SendError(res, 400, "bad_request", "limit must be an integer");
        return;
      }
      if (*limit < 0) {
        SendError(res, 400, "bad_request", "limit must be non-negative");
        return;
      }
    }
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const ReviewTask& t : store.List(status, limit)) out.push_back(TaskToJson(t));
    SendJson(res, 200, out);
  });

  http.Get("/api/tasks/next", [this](const httplib::Request&, httplib::Response& res) {
    std::optional<ReviewTask> task = store.Next();
    if (!task) {
      res.status = 204;
      return;
    }
    SendJson(res, 200, TaskToJson(*task));
  });

  http.Post(R"(/api/tasks/([^/]+)/revision)",
            [this](const httplib::Request& req, httplib::Response& res) {
              json body = json::parse(req.body, nullptr, false);
              if (body.is_discarded() || !body.is_object() || !body.contains("answer") ||
                  !body["answer"].is_string()) {
                SendError(res, 400, "bad_request", "body must be {\"answer\": string}");
                return;
              }
              SendResult(res, store.SubmitRevision(req.matches[1], body["answer"].get<std::string>()));
            });

  http.Post(R"(/api/tasks/([^/]+)/skip)", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
    SendResult(res, store.Skip(req.matches[1]));
  });

  http.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    SendJson(res, 200, StatsToJson(store.Stats()));
  });

  http.Post("/api/export", [this](const httplib::Request& req, httplib::Response& res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("output_path") ||
        !body["output_path"].is_string() || body["output_path"].get<std::string>().empty()) {
      SendError(res, 400, "bad_request", "body must be {\"output_path\": string}");
      return;
    }
    std::filesystem::path out = body["output_path"].get<std::string>();
    TrainingSetVariant variant;
    variant.id = out.stem().string();
    variant.method = Method::kAnswerShortening;
    variant.backend = "manual";
    variant.labels = store.ExportRevised(labels);
    try {
      io::WriteFile(out, io::DumpLabels(variant.labels));
      io::WriteFile(out.parent_path() / (variant.id + ".manifest.json"),
                    ManifestJson(variant).dump(2) + "\n");
    } catch (const std::exception& e) {
      SendError(res, 500, "io_error", e.what());
      return;
    }
    int revised = 0;
    for (size_t i = 0; i < labels.size(); ++i) {
      if (variant.labels[i].answers != labels[i].answers) ++revised;
    }
    nlohmann::ordered_json result;
    result["output_path"] = out.string();
    result["labels"] = variant.labels.size();
    result["revised"] = revised;
    SendJson(res, 200, result);
  });

  http.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      SendError(res, 500, "internal", e.what());
    }
  });
}

AnnotationServer::AnnotationServer(AnnotationStore& store, std::vector<QALabel> labels,
                                   ServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(labels), std::move(options))) {
  impl_->Routes();
}

AnnotationServer::~AnnotationServer() { Stop(); }

int AnnotationServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

bool AnnotationServer::Serve() { return impl_->http.listen_after_bind(); }

void AnnotationServer::Stop() {
  if (impl_) impl_->http.stop();
}

void AnnotationServer::WaitUntilReady() const { impl_->http.wait_until_ready(); }

}  // namespace mrcdata
