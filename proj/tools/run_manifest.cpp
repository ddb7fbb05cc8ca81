#include "run_manifest.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>

#include "zetawalk/errors.hpp"

namespace zetawalk::cli {

RunManifest::RunManifest(std::string command)
    : command_(std::move(command)),
      started_(std::chrono::system_clock::now()),
      started_steady_(std::chrono::steady_clock::now()) {}

nlohmann::json RunManifest::finish() const {
    const auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_steady_).count();
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command_;
    j["parameters"] = parameters_;
    j["seed"] = seed_ ? nlohmann::json(*seed_) : nlohmann::json(nullptr);
    j["started_at"] = iso8601_utc(started_);
    j["finished_at"] = iso8601_utc(std::chrono::system_clock::now());
    j["wall_time_s"] = wall;
    nlohmann::json outs = nlohmann::json::array();
    for (const auto& p : outputs_) outs.push_back(p.string());
    j["outputs"] = outs;
    if (capped_fraction_) j["capped_fraction"] = *capped_fraction_;
    return j;
}

std::filesystem::path RunManifest::write_beside(const std::filesystem::path& primary) const {
    std::filesystem::path path = primary;
    path += ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write " + path.string());
    out << finish().dump(2) << '\n';
    return path;
}

std::filesystem::path resolve_output(const std::filesystem::path& requested) {
    std::filesystem::path path = requested;
    if (path.is_relative()) {
        if (const char* dir = std::getenv("ZETAWALK_OUT_DIR"); dir && *dir) path = std::filesystem::path(dir) / path;
    }
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    return path;
}

std::string iso8601_utc(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace zetawalk::cli
