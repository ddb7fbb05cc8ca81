#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace zetawalk::cli {

inline constexpr int kSchemaVersion = 1;

/// Provenance record written next to each output file as
/// <output>.manifest.json.
class RunManifest {
public:
    explicit RunManifest(std::string command);

    void parameter(const std::string& key, nlohmann::json value) { parameters_[key] = std::move(value); }
    void seed(std::uint64_t s) { seed_ = s; }
    void capped_fraction(double f) { capped_fraction_ = f; }
    void output(const std::filesystem::path& p) { outputs_.push_back(p); }

    nlohmann::json finish() const;

    /// Writes finish() to <primary output>.manifest.json and returns its path.
    std::filesystem::path write_beside(const std::filesystem::path& primary) const;

private:
    std::string command_;
    nlohmann::json parameters_ = nlohmann::json::object();
    std::optional<std::uint64_t> seed_;
    std::optional<double> capped_fraction_;
    std::vector<std::filesystem::path> outputs_;
    std::chrono::system_clock::time_point started_;
    std::chrono::steady_clock::time_point started_steady_;
};

/// Relative paths are placed under $ZETAWALK_OUT_DIR when it is set.
std::filesystem::path resolve_output(const std::filesystem::path& requested);

std::string iso8601_utc(std::chrono::system_clock::time_point tp);

}  // namespace zetawalk::cli
