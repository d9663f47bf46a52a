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

#include "bhadra/repository.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace bhadra {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool contains_folded(std::string_view haystack, std::string_view folded_needle) {
  return lower(haystack).find(folded_needle) != std::string::npos;
}

[[noreturn]] void io_failure(const std::string& what, const fs::path& path) {
  throw Error(ErrorCode::kIo, what + ": " + std::strerror(errno), path.string());
}

void write_all(int fd, std::string_view bytes, const fs::path& path) {
  while (!bytes.empty()) {
    const ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_failure("write failed", path);
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

void sync_directory(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

// Temp file in the same directory, fsync, rename over the target.
void write_atomically(const fs::path& target, std::string_view bytes) {
  static std::atomic<unsigned> counter{0};
  fs::path temp = target;
  temp += ".tmp-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  const int fd = ::open(temp.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_CLOEXEC, 0644);
  if (fd < 0) io_failure("cannot create temporary file", temp);
  try {
    write_all(fd, bytes, temp);
    if (::fsync(fd) != 0) io_failure("fsync failed", temp);
  } catch (...) {
    ::close(fd);
    ::unlink(temp.c_str());
    throw;
  }
  ::close(fd);
  if (::rename(temp.c_str(), target.c_str()) != 0) {
    const int saved = errno;
    ::unlink(temp.c_str());
    errno = saved;
    io_failure("rename failed", target);
  }
  sync_directory(target.parent_path());
}

}  // namespace

ModelSummary summarize(const AttackModel& model) {
  return {model.id, model.title, model.status, model.adversary, model.technique_ids().size(), model.modified};
}

nlohmann::ordered_json summary_to_json(const ModelSummary& summary) {
  nlohmann::ordered_json doc;
  doc["id"] = summary.id;
  doc["title"] = summary.title;
  doc["status"] = std::string(to_string(summary.status));
  auto adversary = nlohmann::ordered_json::array();
  for (AdversaryClass a : summary.adversary) adversary.push_back(std::string(to_string(a)));
  doc["adversary"] = std::move(adversary);
  doc["tag_count"] = summary.tag_count;
  doc["modified"] = summary.modified.str();
  return doc;
}

struct Repository::State {
  struct Entry {
    fs::path path;
    AttackModel model;
  };

  fs::path root;
  Taxonomy taxonomy;
  std::vector<std::string> warnings;

  mutable std::shared_mutex index_mutex;
  std::map<std::string, Entry> index;  // keyed by lowercased id

  std::mutex locks_mutex;
  std::unordered_map<std::string, std::shared_ptr<std::mutex>> write_locks;

  State(fs::path r, Taxonomy t) : root(std::move(r)), taxonomy(std::move(t)) {}

  std::shared_ptr<std::mutex> lock_for(const std::string& key) {
    std::lock_guard guard(locks_mutex);
    auto& slot = write_locks[key];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
  }

  std::optional<Entry> lookup(const std::string& key) const {
    std::shared_lock guard(index_mutex);
    auto it = index.find(key);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  void scan() {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw Error(ErrorCode::kIo, "not a directory", root.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) throw Error(ErrorCode::kIo, ec.message(), root.string());
    std::sort(files.begin(), files.end());

    for (const auto& path : files) {
      const std::string name = path.filename().string();
      try {
        AttackModel model = load_model_file(path);
        if (!is_valid_model_id(model.id)) {
          warnings.push_back(name + ": invalid model id '" + model.id + "'");
          continue;
        }
        const ValidationReport report = validate_model(model, taxonomy);
        if (!report.valid()) {
          std::string codes;
          for (const auto& f : report.findings()) {
            if (f.severity == FindingSeverity::kError) codes += (codes.empty() ? "" : ", ") + f.code;
          }
          warnings.push_back(name + ": invalid model (" + codes + ")");
          continue;
        }
        const std::string key = lower(model.id);
        if (index.count(key)) {
          warnings.push_back(name + ": duplicate model id '" + model.id + "'");
          continue;
        }
        index.emplace(key, Entry{path, std::move(model)});
      } catch (const std::exception& e) {
        warnings.push_back(name + ": " + e.what());
      }
    }
  }
};

Repository::Repository(fs::path root, Taxonomy taxonomy)
    : state_(std::make_unique<State>(std::move(root), std::move(taxonomy))) {
  state_->scan();
}

Repository::~Repository() = default;
Repository::Repository(Repository&&) noexcept = default;
Repository& Repository::operator=(Repository&&) noexcept = default;

const fs::path& Repository::root() const { return state_->root; }
const Taxonomy& Repository::taxonomy() const { return state_->taxonomy; }
const std::vector<std::string>& Repository::warnings() const { return state_->warnings; }

std::size_t Repository::size() const {
  std::shared_lock guard(state_->index_mutex);
  return state_->index.size();
}

std::map<std::string, IndexEntry> Repository::index() const {
  std::shared_lock guard(state_->index_mutex);
  std::map<std::string, IndexEntry> out;
  for (const auto& [key, entry] : state_->index) {
    out.emplace(entry.model.id, IndexEntry{entry.path, entry.model.modified, entry.model.title});
  }
  return out;
}

bool Repository::contains(std::string_view id) const {
  std::shared_lock guard(state_->index_mutex);
  return state_->index.count(lower(id)) > 0;
}

std::optional<AttackModel> Repository::get(std::string_view id) const {
  auto entry = state_->lookup(lower(id));
  if (!entry) return std::nullopt;
  return std::move(entry->model);
}

std::vector<AttackModel> Repository::all() const {
  std::shared_lock guard(state_->index_mutex);
  std::vector<AttackModel> out;
  out.reserve(state_->index.size());
  for (const auto& [key, entry] : state_->index) out.push_back(entry.model);
  std::sort(out.begin(), out.end(), [](const AttackModel& a, const AttackModel& b) { return a.id < b.id; });
  return out;
}

AttackModel Repository::put(const AttackModel& model, std::optional<Timestamp> expected_modified) {
  if (!is_valid_model_id(model.id)) throw Error(ErrorCode::kArgument, "invalid model id '" + model.id + "'");
  ValidationReport report = validate_model(model, state_->taxonomy);
  if (!report.valid()) throw ValidationFailure(std::move(report), "model " + model.id + " failed validation");

  const std::string key = lower(model.id);
  const auto lock = state_->lock_for(key);
  std::lock_guard writer(*lock);

  const auto existing = state_->lookup(key);
  if (expected_modified) {
    if (!existing) {
      throw Error(ErrorCode::kConflict, "model " + model.id + " does not exist, but a modified precondition was given");
    }
    if (existing->model.modified != *expected_modified) {
      throw Error(ErrorCode::kConflict, "model " + model.id + " was modified at " + existing->model.modified.str() +
                                            ", not " + expected_modified->str());
    }
  }

  AttackModel stored = model;
  Timestamp floor = model.modified;
  if (existing) {
    stored.created = existing->model.created;
    floor = std::max(floor, existing->model.modified);
  }
  stored.modified = Timestamp::next_after(floor);
  if (!existing && stored.created == Timestamp{}) stored.created = stored.modified;

  const fs::path path = existing ? existing->path : state_->root / (key + ".json");
  write_atomically(path, serialize_model(stored));

  std::unique_lock guard(state_->index_mutex);
  state_->index.insert_or_assign(key, State::Entry{path, stored});
  return stored;
}

bool Repository::remove(std::string_view id) {
  const std::string key = lower(id);
  const auto lock = state_->lock_for(key);
  std::lock_guard writer(*lock);
  const auto existing = state_->lookup(key);
  if (!existing) return false;
  std::error_code ec;
  fs::remove(existing->path, ec);
  if (ec) throw Error(ErrorCode::kIo, ec.message(), existing->path.string());
  sync_directory(state_->root);
  std::unique_lock guard(state_->index_mutex);
  state_->index.erase(key);
  return true;
}

std::vector<ModelSummary> Repository::query(const QueryFilter& filter) const {
  const Taxonomy& taxonomy = state_->taxonomy;
  if (filter.technique && !taxonomy.find_technique(*filter.technique)) {
    throw Error(ErrorCode::kArgument, "unknown technique '" + *filter.technique + "'");
  }
  if (filter.impact) {
    const Technique* technique = taxonomy.find_technique(*filter.impact);
    if (!technique) throw Error(ErrorCode::kArgument, "unknown technique '" + *filter.impact + "'");
    if (technique->tactic != "IM") {
      throw Error(ErrorCode::kArgument, "'" + *filter.impact + "' is not an impact technique");
    }
  }
  const std::optional<std::string> needle = filter.text ? std::optional(lower(*filter.text)) : std::nullopt;

  std::vector<ModelSummary> out;
  {
    std::shared_lock guard(state_->index_mutex);
    for (const auto& [key, entry] : state_->index) {
      const AttackModel& m = entry.model;
      if (filter.technique && !m.find_tag(*filter.technique)) continue;
      if (filter.impact && !m.find_tag(*filter.impact)) continue;
      if (filter.adversary && !m.adversary.count(*filter.adversary)) continue;
      if (needle && !contains_folded(m.id, *needle) && !contains_folded(m.title, *needle) &&
          !contains_folded(m.summary, *needle)) {
        continue;
      }
      out.push_back(summarize(m));
    }
  }
  std::sort(out.begin(), out.end(), [](const ModelSummary& a, const ModelSummary& b) {
    return std::tie(a.title, a.id) < std::tie(b.title, b.id);
  });
  return out;
}

}  // namespace bhadra
