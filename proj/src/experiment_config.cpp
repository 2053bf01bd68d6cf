#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <type_traits>

#include "json.hpp"

#include "oddsinv/error.hpp"
#include "oddsinv/experiment.hpp"

namespace oddsinv {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& what) { fail(ErrorCode::config, what); }

template <class T>
T get_as(const json& j, const char* field) {
  if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
    if (!j.is_number_unsigned())
      config_error(std::string("field '") + field + "' must be a nonnegative integer");
  }
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + field + "' has the wrong type");
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (auto k : known) found = found || key == k;
    if (!found) config_error("unknown field '" + key + "' in " + where);
  }
}

void parse_table(const json& t, ExperimentConfig& cfg) {
  if (!t.is_object()) config_error("'table' must be an object");
  reject_unknown_keys(t, {"dims", "counts"}, "table");
  if (!t.contains("counts")) config_error("'table.counts' is required");
  const json& counts = t.at("counts");
  if (!counts.is_array() || counts.empty()) config_error("'table.counts' must be a nonempty array");
  if (counts.front().is_array()) {
    const std::size_t cols = counts.front().size();
    for (const auto& row : counts) {
      if (!row.is_array() || row.size() != cols) config_error("'table.counts' rows must have equal length");
      for (const auto& v : row) cfg.counts.push_back(get_as<std::uint64_t>(v, "table.counts"));
    }
    cfg.dims = {counts.size(), cols};
  } else {
    for (const auto& v : counts) cfg.counts.push_back(get_as<std::uint64_t>(v, "table.counts"));
    cfg.dims = {cfg.counts.size()};
  }
  if (t.contains("dims")) cfg.dims = get_as<std::vector<std::size_t>>(t.at("dims"), "table.dims");
}

void parse_partition(const json& p, ExperimentConfig& cfg) {
  if (p.is_string()) {
    cfg.partition.kind = p.get<std::string>();
    if (cfg.partition.kind != "rows" && cfg.partition.kind != "columns")
      config_error("'partition' must be \"rows\", \"columns\" or a list of blocks");
  } else if (p.is_array()) {
    cfg.partition.kind = "blocks";
    cfg.partition.blocks = get_as<std::vector<std::vector<std::size_t>>>(p, "partition");
  } else {
    config_error("'partition' must be \"rows\", \"columns\" or a list of blocks");
  }
}

void parse_contrast(const json& c, ExperimentConfig& cfg) {
  if (!c.is_object()) config_error("'contrast' must be an object");
  reject_unknown_keys(c, {"builder", "cell", "k", "matrix"}, "contrast");
  if (c.contains("matrix")) {
    cfg.contrast.builder = "matrix";
    const json& m = c.at("matrix");
    if (!m.is_array() || m.empty()) config_error("'contrast.matrix' must be a nonempty array");
    if (m.front().is_array()) {
      cfg.contrast.matrix = get_as<std::vector<std::vector<double>>>(m, "contrast.matrix");
    } else {
      for (const auto& v : m) cfg.contrast.matrix.push_back({get_as<double>(v, "contrast.matrix")});
    }
    return;
  }
  if (!c.contains("builder")) config_error("'contrast' needs a 'builder' or a 'matrix'");
  cfg.contrast.builder = get_as<std::string>(c.at("builder"), "contrast.builder");
  if (cfg.contrast.builder == "local") {
    const auto cell = c.contains("cell") ? get_as<std::vector<std::size_t>>(c.at("cell"), "contrast.cell")
                                         : std::vector<std::size_t>{0, 0};
    if (cell.size() != 2) config_error("'contrast.cell' must be [i, j]");
    cfg.contrast.cell_row = cell[0];
    cfg.contrast.cell_col = cell[1];
  } else if (cfg.contrast.builder == "higher_order") {
    if (!c.contains("k")) config_error("'contrast.k' is required for higher_order");
    cfg.contrast.order = get_as<std::size_t>(c.at("k"), "contrast.k");
  } else if (cfg.contrast.builder != "or2x2") {
    config_error("unknown contrast builder '" + cfg.contrast.builder + "'");
  }
}

void parse_prior(const json& p, ExperimentConfig& cfg) {
  if (!p.is_object()) config_error("'prior' must be an object");
  reject_unknown_keys(p, {"kind", "alpha"}, "prior");
  if (p.contains("kind")) {
    const auto kind = get_as<std::string>(p.at("kind"), "prior.kind");
    if (kind == "dirichlet")
      cfg.prior = PriorKind::dirichlet;
    else if (kind == "dependent")
      cfg.prior = PriorKind::dependent;
    else
      config_error("unknown prior kind '" + kind + "'");
  }
  if (p.contains("alpha")) {
    const json& a = p.at("alpha");
    if (a.is_number())
      cfg.alpha.assign(1, a.get<double>());  // broadcast once the table size is known
    else
      cfg.alpha = get_as<std::vector<double>>(a, "prior.alpha");
  }
}

std::size_t product(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) config_error("config must be a JSON object");
  reject_unknown_keys(root,
                      {"table", "partition", "contrast", "prior", "schemes", "samples", "seed",
                       "t_grid", "out", "concentration"},
                      "config");

  ExperimentConfig cfg;
  if (!root.contains("table")) config_error("'table' is required");
  parse_table(root.at("table"), cfg);
  if (root.contains("partition")) parse_partition(root.at("partition"), cfg);
  if (root.contains("contrast")) parse_contrast(root.at("contrast"), cfg);
  if (root.contains("prior")) parse_prior(root.at("prior"), cfg);
  if (cfg.alpha.empty()) cfg.alpha.assign(1, 1.0);
  if (cfg.alpha.size() == 1) cfg.alpha.assign(cfg.counts.size(), cfg.alpha.front());

  if (root.contains("schemes")) {
    cfg.schemes.clear();
    for (const auto& s : root.at("schemes")) {
      try {
        cfg.schemes.push_back(parse_scheme(get_as<std::string>(s, "schemes")));
      } catch (const Error& e) {
        config_error(e.what());
      }
    }
  }
  if (root.contains("samples")) cfg.samples = get_as<std::size_t>(root.at("samples"), "samples");
  if (root.contains("seed")) cfg.seed = get_as<std::uint64_t>(root.at("seed"), "seed");
  if (root.contains("out")) cfg.out_dir = get_as<std::string>(root.at("out"), "out");
  if (root.contains("t_grid")) {
    const json& g = root.at("t_grid");
    reject_unknown_keys(g, {"min", "max", "points"}, "t_grid");
    if (g.contains("min")) cfg.t_grid.tmin = get_as<double>(g.at("min"), "t_grid.min");
    if (g.contains("max")) cfg.t_grid.tmax = get_as<double>(g.at("max"), "t_grid.max");
    if (g.contains("points")) cfg.t_grid.points = get_as<std::size_t>(g.at("points"), "t_grid.points");
  }
  if (root.contains("concentration")) {
    const json& c = root.at("concentration");
    reject_unknown_keys(c, {"theta0", "n"}, "concentration");
    if (c.contains("theta0")) cfg.theta0 = get_as<std::vector<double>>(c.at("theta0"), "concentration.theta0");
    if (c.contains("n")) cfg.n_list = get_as<std::vector<std::uint64_t>>(c.at("n"), "concentration.n");
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string ExperimentConfig::to_json() const {
  json root;
  root["table"] = {{"dims", dims}, {"counts", counts}};
  if (partition.kind == "blocks")
    root["partition"] = partition.blocks;
  else
    root["partition"] = partition.kind;
  if (contrast.builder == "matrix") {
    root["contrast"] = {{"matrix", contrast.matrix}};
  } else {
    json c = {{"builder", contrast.builder}};
    if (contrast.builder == "local") c["cell"] = {contrast.cell_row, contrast.cell_col};
    if (contrast.builder == "higher_order") c["k"] = contrast.order;
    root["contrast"] = c;
  }
  root["prior"] = {{"kind", prior == PriorKind::dirichlet ? "dirichlet" : "dependent"},
                   {"alpha", alpha}};
  json schemes_json = json::array();
  for (Scheme s : schemes) schemes_json.push_back(std::string(to_string(s)));
  root["schemes"] = schemes_json;
  root["samples"] = samples;
  root["seed"] = seed;
  root["t_grid"] = {{"min", t_grid.tmin}, {"max", t_grid.tmax}, {"points", t_grid.points}};
  root["out"] = out_dir;
  json conc = {{"n", n_list}};
  if (!theta0.empty()) conc["theta0"] = theta0;
  root["concentration"] = conc;
  return root.dump(2);
}

std::size_t ExperimentConfig::cells() const { return counts.size(); }

CountVector ExperimentConfig::table() const { return CountVector(counts); }

Partition ExperimentConfig::make_partition() const {
  const std::size_t r = cells();
  if (partition.kind == "blocks") return Partition::from_one_based(r, partition.blocks);
  if (dims.size() < 2) config_error("partition \"" + partition.kind + "\" needs a table with at least two dimensions");
  if (partition.kind == "rows") return Partition::rows(dims.front(), r / dims.front());
  if (partition.kind == "columns") return Partition::columns(r / dims.back(), dims.back());
  config_error("unknown partition kind '" + partition.kind + "'");
}

ContrastMatrix ExperimentConfig::make_contrast() const {
  const std::string& b = contrast.builder;
  if (b == "matrix") return ContrastMatrix::from_cell_rows(contrast.matrix);
  if (b == "or2x2") {
    if (cells() != 4) config_error("contrast or2x2 needs a 2x2 table");
    return odds_ratio_2x2();
  }
  if (b == "local") {
    if (dims.size() != 2) config_error("contrast local needs a two-dimensional table");
    return local_odds_ratio(dims[0], dims[1], contrast.cell_row, contrast.cell_col);
  }
  if (b == "higher_order") {
    if (contrast.order < 1 || contrast.order > 20 || cells() != (std::size_t{1} << contrast.order))
      config_error("contrast higher_order with k = " + std::to_string(contrast.order) +
                   " needs a table with 2^k cells");
    return higher_order_odds_ratio(contrast.order);
  }
  config_error("unknown contrast builder '" + b + "'");
}

DirichletPrior ExperimentConfig::make_prior() const { return DirichletPrior(alpha); }

void ExperimentConfig::validate() const {
  try {
    if (counts.empty()) config_error("table has no cells");
    if (dims.empty() || product(dims) != counts.size())
      config_error("table dims do not multiply to the number of counts");
    if (alpha.size() != cells())
      config_error("prior alpha has " + std::to_string(alpha.size()) + " entries, table has " +
                   std::to_string(cells()) + " cells");
    const DirichletPrior p = make_prior();
    const Partition part = make_partition();
    const ContrastMatrix c = make_contrast();
    if (c.rows() != cells()) config_error("contrast rows do not match the table cells");
    if (prior == PriorKind::dependent) {
      if (cells() != 4 || !(c == odds_ratio_2x2()) || !(part == Partition::rows(2, 2)))
        config_error("dependent prior is defined for the 2x2 odds ratio with rows fixed");
    }
    if (schemes.empty()) config_error("at least one scheme is required");
    if (samples < 2) config_error("samples must be at least 2");
    if (t_grid.points == 0 || !(t_grid.tmax > t_grid.tmin))
      config_error("t_grid needs points >= 1 and max > min");
    if (!theta0.empty() && theta0.size() != cells()) config_error("concentration.theta0 has the wrong length");
    if (n_list.empty()) config_error("concentration.n must be nonempty");
    (void)p;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) throw;
    config_error(e.what());
  }
}

}  // namespace oddsinv
