// Copyright 2026 The Bhadra Authors
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

#include "bhadra/http_api.hpp"

#include "bhadra/analytics.hpp"
#include "bhadra/comparison.hpp"
#include "httplib.h"
#include "json_support.hpp"

namespace bhadra {

using detail::OrderedField;
using detail::OrderedJson;

namespace {

constexpr const char* kJson = "application/json";
constexpr std::size_t kMaxPayload = 8 * 1024 * 1024;

void send_json(httplib::Response& res, int status, const OrderedJson& body) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message,
                const ValidationReport* report = nullptr) {
  OrderedJson body;
  body["code"] = code;
  body["message"] = message;
  if (report) body["findings"] = report_to_json(*report)["findings"];
  send_json(res, status, body);
}

std::optional<std::string> param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  return req.get_param_value(name);
}

// Runs a handler and maps the library's exceptions onto status codes.
template <typename F>
httplib::Server::Handler guarded(F&& body) {
  return [body = std::forward<F>(body)](const httplib::Request& req, httplib::Response& res) {
    try {
      body(req, res);
    } catch (const ValidationFailure& e) {
      send_error(res, 422, "VALIDATION_FAILED", e.what(), &e.report());
    } catch (const Error& e) {
      send_error(res, http_status(e.code()), to_string(e.code()), e.what());
    }
  };
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kArgument: return 400;
    case ErrorCode::kVersion: return 422;
    case ErrorCode::kIo: return 500;
    case ErrorCode::kConflict: return 409;
    case ErrorCode::kUndefined: return 422;
  }
  return 500;
}

struct ApiServer::Impl {
  Repository& repository;
  std::string taxonomy_document;
  httplib::Server server;

  Impl(Repository& repo, std::string document) : repository(repo), taxonomy_document(std::move(document)) {
    server.set_payload_max_length(kMaxPayload);
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, PUT, POST, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_error(res, 404, "NOT_FOUND", "no route for " + req.method + " " + req.path);
      } else {
        send_error(res, res.status, "HTTP_ERROR", httplib::status_message(res.status));
      }
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string message = "internal error";
      try {
        if (ep) std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        message = e.what();
      } catch (...) {
      }
      send_error(res, 500, "INTERNAL", message);
    });

    server.Get("/api/v1/taxonomy", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(taxonomy_document, kJson);
    });
    server.Get("/api/v1/attacks", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 list_attacks(req, res);
               }));
    server.Get(R"(/api/v1/attacks/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 auto model = repository.get(id);
                 if (!model) throw Error(ErrorCode::kNotFound, "no attack model '" + id + "'");
                 send_json(res, 200, model_to_json(*model));
               }));
    server.Put(R"(/api/v1/attacks/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                 put_attack(req, res);
               }));
    server.Delete(R"(/api/v1/attacks/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                    const std::string id = req.matches[1];
                    if (!repository.remove(id)) throw Error(ErrorCode::kNotFound, "no attack model '" + id + "'");
                    res.status = 204;
                  }));
    server.Post("/api/v1/compare", guarded([this](const httplib::Request& req, httplib::Response& res) {
                  compare_attacks(req, res);
                }));
    server.Get("/api/v1/stats", guarded([this](const httplib::Request&, httplib::Response& res) {
                 const auto corpus = repository.all();
                 if (corpus.empty()) {
                   send_error(res, 422, "EMPTY_CORPUS", "the repository holds no attack models");
                   return;
                 }
                 const Taxonomy& taxonomy = repository.taxonomy();
                 send_json(res, 200, stats_to_json(technique_frequency(corpus, taxonomy), taxonomy));
               }));
  }

  void list_attacks(const httplib::Request& req, httplib::Response& res) {
    QueryFilter filter;
    filter.technique = param(req, "technique");
    filter.impact = param(req, "impact");
    filter.text = param(req, "text");
    if (auto adversary = param(req, "adversary")) {
      filter.adversary = parse_adversary_class(*adversary);
      if (!filter.adversary) throw Error(ErrorCode::kArgument, "unknown adversary class '" + *adversary + "'");
    }
    OrderedJson attacks = OrderedJson::array();
    for (const auto& summary : repository.query(filter)) attacks.push_back(summary_to_json(summary));
    OrderedJson body;
    body["count"] = attacks.size();
    body["attacks"] = std::move(attacks);
    send_json(res, 200, body);
  }

  void put_attack(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const OrderedJson doc = detail::parse_ordered_json(req.body);
    const OrderedField root = OrderedField(doc, "").object();
    std::optional<Timestamp> expected;
    AttackModel model;
    if (root.has("model")) {
      if (root.has("expected_modified") && !root.node().at("expected_modified").is_null()) {
        const OrderedField field = root.at("expected_modified");
        expected = Timestamp::parse(field.string());
        if (!expected) field.fail("not a timestamp");
      }
      model = model_from_json(root.at("model").object().node());
    } else {
      model = model_from_json(doc);
    }
    if (model.id != id) {
      throw Error(ErrorCode::kArgument, "body id '" + model.id + "' does not match path id '" + id + "'");
    }
    send_json(res, 200, model_to_json(repository.put(model, expected)));
  }

  void compare_attacks(const httplib::Request& req, httplib::Response& res) {
    const OrderedJson doc = detail::parse_ordered_json(req.body);
    const OrderedField root = OrderedField(doc, "").object();
    const OrderedField ids = root.at("ids");
    if (!ids.node().is_array()) ids.fail("expected an array");
    std::vector<AttackModel> models;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::string id = ids.index(i).string();
      auto model = repository.get(id);
      if (!model) throw Error(ErrorCode::kNotFound, "no attack model '" + id + "'");
      models.push_back(std::move(*model));
    }
    std::vector<std::string> palette = default_palette();
    if (root.has("palette")) {
      const OrderedField field = root.at("palette");
      if (!field.node().is_array()) field.fail("expected an array");
      palette.clear();
      for (std::size_t i = 0; i < field.size(); ++i) palette.push_back(field.index(i).string());
    }
    const Taxonomy& taxonomy = repository.taxonomy();
    send_json(res, 200, comparison_to_json(compare(models, palette, taxonomy), taxonomy));
  }
};

ApiServer::ApiServer(Repository& repository, std::string taxonomy_document)
    : impl_(std::make_unique<Impl>(repository, std::move(taxonomy_document))) {}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int ApiServer::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool ApiServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void ApiServer::stop() { impl_->server.stop(); }
void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace bhadra
