// Generates the bundled benchmark CSVs plus data/manifest.json.
//
// Each dataset mimics the shape statistics of a published class-imbalance
// benchmark (instance count, feature count, minority fraction) with a known
// geometry: the minority class sits in two tight islands and part of the
// majority mass occupies the corridor between them, so naive interpolation
// between minority points produces samples inside majority territory.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "smgan/rng.hpp"

using smgan::Rng;

namespace {

struct GenSpec {
  std::string name;
  std::size_t rows = 0;
  std::size_t d = 0;
  std::size_t minority = 0;
  std::uint64_t seed = 0;
  std::string positive_label = "1";
  std::string negative_label = "0";
  long long label_col = -1;  // -1 = last column
  bool header = false;
  double island_offset = 0.44;  // distance of each island from the corridor blob
  double island_radius = 0.07;  // minority points fill a ball of this radius
  double majority_sd = 0.05;
  double far_blob_sd = 0.07;
  double island2_share = 0.35;
};

std::vector<double> unit_direction(std::size_t d, Rng& rng) {
  std::vector<double> v(d);
  double norm = 0.0;
  for (double& x : v) {
    x = rng.normal();
    norm += x * x;
  }
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct Row {
  std::vector<double> x;
  bool minority = false;
};

std::vector<Row> generate(const GenSpec& spec) {
  Rng rng(spec.seed);
  const std::size_t d = spec.d;

  // Minority islands straddle the middle of the cube; part of the majority
  // mass sits on the corridor between them (or at a nearby center for
  // single-island datasets), the rest in blobs kept clear of the islands.
  std::vector<double> center(d, 0.5);
  for (double& c : center) c += (rng.uniform01() - 0.5) * 0.06;
  const std::vector<double> axis = unit_direction(d, rng);

  std::vector<double> island1(d), island2(d);
  for (std::size_t j = 0; j < d; ++j) {
    island1[j] = std::clamp(center[j] + spec.island_offset * axis[j], 0.10, 0.90);
    island2[j] = std::clamp(center[j] - spec.island_offset * axis[j], 0.10, 0.90);
  }
  const bool two_islands = spec.island2_share > 0.0;

  std::vector<std::vector<double>> far_centers;
  while (far_centers.size() < 3) {
    std::vector<double> c(d);
    for (double& x : c) x = 0.2 + 0.6 * rng.uniform01();
    if (dist(c, island1) < 0.40) continue;
    if (two_islands && dist(c, island2) < 0.40) continue;
    far_centers.push_back(std::move(c));
  }

  std::vector<Row> rows;
  rows.reserve(spec.rows);
  const std::size_t majority = spec.rows - spec.minority;
  const std::size_t corridor = majority / 4;
  for (std::size_t i = 0; i < majority; ++i) {
    Row r;
    r.x.resize(d);
    if (i < corridor && two_islands) {
      for (std::size_t j = 0; j < d; ++j) r.x[j] = center[j] + spec.majority_sd * rng.normal();
    } else {
      const auto& c = far_centers[i % far_centers.size()];
      for (std::size_t j = 0; j < d; ++j) r.x[j] = c[j] + spec.far_blob_sd * rng.normal();
    }
    rows.push_back(std::move(r));
  }
  const std::size_t island2_count =
      static_cast<std::size_t>(std::llround(spec.island2_share * static_cast<double>(spec.minority)));
  for (std::size_t i = 0; i < spec.minority; ++i) {
    Row r;
    r.x.resize(d);
    r.minority = true;
    const std::vector<double>& a = i < island2_count ? island2 : island1;
    // uniform draw inside a ball: bounded support, no stray tail points
    std::vector<double> dir = unit_direction(d, rng);
    const double radius =
        spec.island_radius * std::pow(rng.uniform01(), 1.0 / static_cast<double>(d));
    for (std::size_t j = 0; j < d; ++j) r.x[j] = a[j] + radius * dir[j];
    rows.push_back(std::move(r));
  }
  rng.shuffle(rows);

  // Per-feature affine transform into heterogeneous raw units.
  for (std::size_t j = 0; j < d; ++j) {
    const double scale = 0.8 + 24.0 * rng.uniform01();
    const double offset = -4.0 + 44.0 * rng.uniform01();
    const bool integer_coded = j + 1 == d && d >= 10;
    for (Row& r : rows) {
      r.x[j] = offset + scale * r.x[j];
      if (integer_coded) r.x[j] = std::round(r.x[j]);
    }
  }
  return rows;
}

void write_csv(const GenSpec& spec, const std::vector<Row>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write " << path << "\n";
    std::exit(1);
  }
  const std::size_t label_col =
      spec.label_col < 0 ? spec.d : static_cast<std::size_t>(spec.label_col);
  if (spec.header) {
    std::size_t f = 0;
    for (std::size_t c = 0; c <= spec.d; ++c) {
      if (c) out << ",";
      if (c == label_col)
        out << "class";
      else
        out << "f" << f++;
    }
    out << "\n";
  }
  char buf[48];
  for (const Row& r : rows) {
    std::size_t f = 0;
    for (std::size_t c = 0; c <= spec.d; ++c) {
      if (c) out << ",";
      if (c == label_col) {
        out << (r.minority ? spec.positive_label : spec.negative_label);
      } else {
        std::snprintf(buf, sizeof(buf), "%.6g", r.x[f++]);
        out << buf;
      }
    }
    out << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_dir = argc > 1 ? argv[1] : "data";
  std::filesystem::create_directories(out_dir);

  std::vector<GenSpec> specs;
  {
    GenSpec s;
    s.name = "ecoli";
    s.rows = 335; s.d = 7; s.minority = 20; s.seed = 2001;
    s.positive_label = "pp"; s.negative_label = "cp";
    s.island2_share = 0.0;  // one compact island; 20 rows cannot support two
    s.island_radius = 0.07;
    specs.push_back(s);
  }
  {
    GenSpec s;
    s.name = "ionosphere";
    s.rows = 351; s.d = 34; s.minority = 125; s.seed = 2002;
    s.positive_label = "b"; s.negative_label = "g";
    s.header = true;
    specs.push_back(s);
  }
  {
    GenSpec s;
    s.name = "pageblocks";
    s.rows = 471; s.d = 10; s.minority = 28; s.seed = 2003;
    s.label_col = 5;
    specs.push_back(s);
  }
  {
    GenSpec s;
    s.name = "yeast";
    s.rows = 513; s.d = 8; s.minority = 51; s.seed = 2004;
    s.island_radius = 0.07;
    s.island2_share = 0.4;
    specs.push_back(s);
  }
  {
    GenSpec s;
    s.name = "wine";
    s.rows = 655; s.d = 11; s.minority = 18; s.seed = 2005;
    s.label_col = 0;
    s.island2_share = 0.0;
    s.island_radius = 0.06;
    specs.push_back(s);
  }

  nlohmann::json manifest = nlohmann::json::array();
  for (const GenSpec& s : specs) {
    const std::vector<Row> rows = generate(s);
    write_csv(s, rows, out_dir + "/" + s.name + ".csv");
    nlohmann::json e;
    e["name"] = s.name;
    e["path"] = s.name + ".csv";
    if (s.header)
      e["label_column"] = "class";
    else
      e["label_column"] = s.label_col < 0 ? s.d : static_cast<std::size_t>(s.label_col);
    e["positive_label"] = s.positive_label;
    e["header"] = s.header;
    manifest.push_back(e);
    std::cout << s.name << ": " << s.rows << " rows, d=" << s.d << ", minority=" << s.minority
              << "\n";
  }
  std::ofstream mf(out_dir + "/manifest.json");
  mf << manifest.dump(2) << "\n";
  return 0;
}
