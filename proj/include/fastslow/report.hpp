#pragma once

#include "fastslow/experiments.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace fastslow {

// Cell values for CSV emission. Doubles are printed in scientific notation
// with 12 significant digits so identical tables serialize byte-identically.
using CsvValue = std::variant<double, long, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvValue>> rows;
};

std::string format_csv(const CsvTable& table);
void emit_csv(const CsvTable& table, const std::filesystem::path& path);

std::string format_sci(double v); // %.11e

// Log-log scatter of (eps, value) points with the fitted line and a
// "slope~x.x" annotation. Markers are <circle> elements; the fit is the only
// <line> element. Returns false (and writes nothing) for fewer than 2 points.
bool format_rate_svg(const RateFit& fit, const std::string& title, std::string& out);
bool emit_rate_svg(const RateFit& fit, const std::string& title,
                   const std::filesystem::path& path);

// The slow and critical lines in the (u, v) coefficient plane, eps annotated.
// Exactly two <line> elements.
std::string format_manifold_svg(double sigma_slow, double sigma_critical,
                                double beta, double eps);
void emit_manifold_svg(double sigma_slow, double sigma_critical, double beta,
                       double eps, const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

struct ManifestEntry {
    std::string name;
    std::uint64_t bytes = 0;
    std::string checksum; // fnv1a64 hex
};

struct RunManifest {
    std::string tool = "fastslow";
    std::string version;
    std::string timestamp;   // excluded from the determinism contract
    std::string config_hash; // fnv1a64 of config bytes
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> files;
    std::string summary_json; // fit/pass summaries, already serialized
};

void write_run_manifest(const RunManifest& m, const std::filesystem::path& path);

} // namespace fastslow
