#include "slicetool/server.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace slicetool {

using nlohmann::json;

SliceOptions slice_options_from_json(const json &j) {
  SliceOptions o;
  if (j.is_null())
    return o;
  if (!j.is_object())
    throw std::invalid_argument("options must be an object");
  static const std::set<std::string> known = {"include_control", "max_nodes", "timeout_secs", "risk_filter"};
  for (const auto &[k, v] : j.items())
    if (!known.count(k))
      throw std::invalid_argument("unknown option '" + k + "'");

  if (auto it = j.find("include_control"); it != j.end()) {
    if (!it->is_boolean())
      throw std::invalid_argument("include_control must be a boolean");
    o.include_control = it->get<bool>();
  }
  if (auto it = j.find("max_nodes"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer() || it->get<long long>() < 1)
      throw std::invalid_argument("max_nodes must be a positive integer");
    o.max_nodes = it->get<std::size_t>();
  }
  if (auto it = j.find("timeout_secs"); it != j.end() && !it->is_null()) {
    if (!it->is_number() || !std::isfinite(it->get<double>()) || it->get<double>() < 0)
      throw std::invalid_argument("timeout_secs must be a non-negative number");
    o.time_budget =
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::duration<double>(it->get<double>()));
  }
  if (auto it = j.find("risk_filter"); it != j.end() && !it->is_null()) {
    if (!it->is_array())
      throw std::invalid_argument("risk_filter must be an array");
    std::vector<int> risks;
    for (const auto &r : *it) {
      if (!r.is_number_integer() || r.get<long long>() < 1)
        throw std::invalid_argument("risk_filter entries must be positive integers");
      risks.push_back(r.get<int>());
    }
    std::sort(risks.begin(), risks.end());
    risks.erase(std::unique(risks.begin(), risks.end()), risks.end());
    o.risk_filter = std::move(risks);
  }
  o.validate();
  return o;
}

std::string_view to_string(JobStatus s) {
  switch (s) {
  case JobStatus::Pending:
    return "pending";
  case JobStatus::Running:
    return "running";
  case JobStatus::Done:
    return "done";
  case JobStatus::Error:
    return "error";
  }
  return "error";
}

namespace {

void send_json(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(dump_json(body), "application/json");
}

void send_error(httplib::Response &res, int status, const std::string &msg) {
  send_json(res, status, {{"error", msg}});
}

std::vector<std::string> list_programs(const std::filesystem::path &dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto &e : std::filesystem::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".slir")
      out.push_back(e.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

Server::Server(ServerConfig config) : config_(std::move(config)), http_(std::make_unique<httplib::Server>()) {
  if (!config_.datasets)
    config_.datasets = &Datasets::bundled();
  http_->set_payload_max_length(config_.max_payload);
  // No SO_REUSEPORT: a second server on a busy port must fail to bind.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char *>(&yes), sizeof(yes));
  });
  routes();
  for (int i = 0; i < config_.workers; ++i)
    workers_.emplace_back([this] { worker_loop(); });
}

Server::~Server() { stop(); }

int Server::bind(const std::string &host, int port) {
  if (port == 0) {
    int p = http_->bind_to_any_port(host);
    if (p <= 0)
      throw BindError("cannot bind " + host);
    return p;
  }
  if (!http_->bind_to_port(host, port))
    throw BindError("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void Server::listen() { http_->listen_after_bind(); }

int Server::start(const std::string &host, int port) {
  int p = bind(host, port);
  listener_ = std::thread([this] { listen(); });
  http_->wait_until_ready();
  return p;
}

void Server::stop() {
  {
    std::lock_guard lock(mu_);
    if (stopping_ && workers_.empty() && !listener_.joinable())
      return;
    stopping_ = true;
  }
  cv_.notify_all();
  http_->stop();
  if (listener_.joinable())
    listener_.join();
  for (auto &t : workers_)
    t.join();
  workers_.clear();
}

void Server::worker_loop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_)
        return;
      id = queue_.front();
      queue_.pop_front();
      jobs_.at(id).status = JobStatus::Running;
    }
    run_job(id);
  }
}

void Server::run_job(const std::string &id) {
  std::string name, text;
  SliceOptions opts;
  {
    std::lock_guard lock(mu_);
    const Job &j = jobs_.at(id);
    name = j.name;
    text = j.text;
    opts = j.options;
  }
  std::shared_ptr<JobResult> result;
  std::string error;
  try {
    Analysis a = analyze(name, text, *config_.datasets, opts);
    result = std::make_shared<JobResult>();
    result->report = report_to_json(a.report);
    result->report_bytes = dump_json(result->report);
    for (const auto &s : a.slices)
      result->slices[s.slice.id] = {dump_json(export_slice_json(s.jimple)), dump_json(export_slice_json(s.java))};
  } catch (const std::exception &e) {
    error = e.what();
  }
  std::lock_guard lock(mu_);
  Job &j = jobs_.at(id);
  if (result) {
    j.result = std::move(result);
    j.status = JobStatus::Done;
  } else {
    j.error = std::move(error);
    j.status = JobStatus::Error;
  }
}

void Server::routes() {
  auto &s = *http_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(.*)", [](const httplib::Request &, httplib::Response &res) { res.status = 204; });

  s.Get("/api/health", [](const httplib::Request &, httplib::Response &res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  s.Get("/api/programs", [this](const httplib::Request &, httplib::Response &res) {
    send_json(res, 200, {{"programs", list_programs(config_.corpus_dir)}});
  });

  s.Get("/api/datasets", [this](const httplib::Request &, httplib::Response &res) {
    json ids = json::array();
    for (const auto &e : config_.datasets->identifiers.entries)
      ids.push_back({{"signature", e.pattern()}, {"data_category", e.data_category}, {"risk", e.risk}});
    json libs = json::array();
    for (const auto &e : config_.datasets->libraries.entries) {
      json l = {{"package_prefix", e.package_prefix}, {"category", e.category}};
      if (e.pseudo_strength)
        l["strength"] = std::string(to_string(*e.pseudo_strength));
      libs.push_back(std::move(l));
    }
    json cats = json::object();
    for (const auto &[k, v] : config_.datasets->libraries.category_map)
      cats[k] = std::string(to_string(v));
    send_json(res, 200,
              {{"identifiers", ids}, {"libraries", libs}, {"category_map", cats}, {"warning_scale", warning_scale_json()}});
  });

  s.Post("/api/analyses", [this](const httplib::Request &req, httplib::Response &res) {
    json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object())
      return send_error(res, 400, "body must be a JSON object");
    Job job;
    try {
      job.options = slice_options_from_json(body.value("options", json(nullptr)));
    } catch (const std::exception &e) {
      return send_error(res, 400, e.what());
    }
    if (body.contains("corpus")) {
      if (!body["corpus"].is_string())
        return send_error(res, 400, "corpus must be a string");
      std::string name = body["corpus"].get<std::string>();
      std::filesystem::path p(name);
      if (p.extension() != ".slir")
        p += ".slir";
      auto programs = list_programs(config_.corpus_dir);
      if (p.has_parent_path() || !std::binary_search(programs.begin(), programs.end(), p.string()))
        return send_error(res, 404, "unknown corpus program '" + name + "'");
      job.name = p.stem().string();
      job.text = read_file(config_.corpus_dir / p);
    } else if (body.contains("program")) {
      if (!body["program"].is_string())
        return send_error(res, 400, "program must be a string");
      job.text = body["program"].get<std::string>();
      job.name = body.value("name", std::string("program"));
    } else {
      return send_error(res, 400, "either corpus or program is required");
    }
    std::string id;
    {
      std::lock_guard lock(mu_);
      id = "job-" + std::to_string(next_id_++);
      job.id = id;
      jobs_.emplace(id, std::move(job));
      queue_.push_back(id);
    }
    cv_.notify_one();
    send_json(res, 202, {{"id", id}});
  });

  s.Get(R"(/api/analyses/([^/]+))", [this](const httplib::Request &req, httplib::Response &res) {
    std::lock_guard lock(mu_);
    auto it = jobs_.find(req.matches[1]);
    if (it == jobs_.end())
      return send_error(res, 404, "unknown analysis");
    const Job &j = it->second;
    json out = {{"id", j.id}, {"status", std::string(to_string(j.status))}};
    if (j.status == JobStatus::Done)
      out["report"] = j.result->report;
    if (j.status == JobStatus::Error)
      out["error"] = j.error;
    send_json(res, 200, out);
  });

  s.Get(R"(/api/analyses/([^/]+)/report)", [this](const httplib::Request &req, httplib::Response &res) {
    std::shared_ptr<const JobResult> result;
    {
      std::lock_guard lock(mu_);
      auto it = jobs_.find(req.matches[1]);
      if (it == jobs_.end())
        return send_error(res, 404, "unknown analysis");
      if (it->second.status != JobStatus::Done)
        return send_error(res, 409, "analysis is " + std::string(to_string(it->second.status)));
      result = it->second.result;
    }
    res.status = 200;
    res.set_content(result->report_bytes, "application/json");
  });

  s.Get(R"(/api/analyses/([^/]+)/slices/(\d+))", [this](const httplib::Request &req, httplib::Response &res) {
    std::string view = req.has_param("view") ? req.get_param_value("view") : "jimple";
    if (view != "jimple" && view != "java")
      return send_error(res, 400, "view must be jimple or java");
    std::shared_ptr<const JobResult> result;
    {
      std::lock_guard lock(mu_);
      auto it = jobs_.find(req.matches[1]);
      if (it == jobs_.end())
        return send_error(res, 404, "unknown analysis");
      if (it->second.status != JobStatus::Done)
        return send_error(res, 409, "analysis is " + std::string(to_string(it->second.status)));
      result = it->second.result;
    }
    auto sl = result->slices.find(std::stoi(req.matches[2]));
    if (sl == result->slices.end())
      return send_error(res, 404, "unknown slice");
    res.status = 200;
    res.set_content(view == "java" ? sl->second.second : sl->second.first, "application/json");
  });
}

} // namespace slicetool
