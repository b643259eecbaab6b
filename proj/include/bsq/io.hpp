#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bsq/asymptotics.hpp"
#include "bsq/painleve.hpp"
#include "bsq/scattering.hpp"
#include "bsq/simulator.hpp"

namespace bsq::io {

using Meta = std::map<std::string, std::string>;

// 64-bit FNV-1a
std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

// %.17g, with nan / inf / -inf spelled out
std::string fmt(double v);
double parse_double(const std::string& s, const std::string& where);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// generic CSV: '#' lines of the form "# key=value" land in meta, the first
// other line is the header
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  Meta meta;
  int column(const std::string& name) const;  // -1 when absent
};
CsvTable parse_csv(const std::string& text, const std::string& origin);
std::string meta_lines(const Meta& m);

// initial data: x,u0,v0 on a uniform grid
std::string initial_data_csv(const InitialData& d);
InitialData parse_initial_data(const std::string& text, const std::string& origin);
InitialData read_initial_data(const std::string& path);
// hash of the canonical initial data CSV
std::string data_hash(const InitialData& d);

// reflection tables: circle file plus ray file
std::string reflection_csv(const ReflectionTable& t);
std::string ray_csv(const ReflectionTable& t);
// ray path that accompanies a circle file: foo.csv -> foo_ray.csv
std::string ray_path_for(const std::string& circle_path);
ReflectionTable parse_reflection(const std::string& circle_text, const std::string& ray_text,
                                 const std::string& origin);
ReflectionTable read_reflection(const std::string& circle_path);
std::vector<RaySample> parse_ray(const std::string& text, const std::string& origin, Meta* meta = nullptr);

std::string verify_json(const std::vector<CheckResult>& checks, const ReflectionTable& t, const VerifyTolerances& tol);

struct AsymptoteRow {
  double x = 0.0, t = 0.0, u = 0.0;
  Sector sector = Sector::II;
  bool extrapolated = false;
};
std::string asymptote_csv(const std::vector<AsymptoteRow>& rows, const Meta& meta);
std::vector<AsymptoteRow> parse_asymptote(const std::string& text, const std::string& origin, Meta* meta = nullptr);
Sector parse_sector(const std::string& s);

std::string hm_csv(const HastingsMcLeod& hm, const Meta& meta = {});

std::string snapshot_csv(const FieldSnapshot& s, const Meta& meta = {});
FieldSnapshot parse_snapshot(const std::string& text, const std::string& origin, Meta* meta = nullptr);

// flat key=value text; '#' starts a comment, blank lines ignored
Meta parse_key_values(const std::string& text, const std::string& origin);
// applies recognised keys to the config; unknown keys are returned
std::vector<std::string> apply_sim_config(const Meta& kv, SimConfig& cfg);
Meta sim_config_meta(const SimConfig& cfg);
std::vector<double> parse_list(const std::string& s, const std::string& where);

}  // namespace bsq::io
