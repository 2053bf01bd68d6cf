#include "oddsinv/oddsinv.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "oddsinv/diagnostics.hpp"
#include "oddsinv/error.hpp"
#include "oddsinv/experiment.hpp"
#include "oddsinv/fnch.hpp"
#include "oddsinv/model.hpp"
#include "oddsinv/rng.hpp"
#include "oddsinv/samplers.hpp"
#include "oddsinv/special_functions.hpp"

struct oddsinv_partition {
  oddsinv::Partition value;
};
struct oddsinv_contrast {
  oddsinv::ContrastMatrix value;
};
struct oddsinv_rng {
  oddsinv::Rng value;
};
struct oddsinv_sample {
  std::vector<oddsinv::WeightedSample> columns;
};
struct oddsinv_config {
  oddsinv::ExperimentConfig value;
};
struct oddsinv_report {
  oddsinv::CommandResult value;
};

namespace {

using namespace oddsinv;

thread_local std::string last_error;

oddsinv_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
      return ODDSINV_E_INVALID_ARGUMENT;
    case ErrorCode::partition_mismatch:
      return ODDSINV_E_PARTITION_MISMATCH;
    case ErrorCode::domain:
      return ODDSINV_E_DOMAIN;
    case ErrorCode::degenerate:
      return ODDSINV_E_DEGENERATE;
    case ErrorCode::pole:
      return ODDSINV_E_POLE;
    case ErrorCode::unreliable:
      return ODDSINV_E_UNRELIABLE;
    case ErrorCode::config:
      return ODDSINV_E_CONFIG;
    case ErrorCode::io:
      return ODDSINV_E_IO;
  }
  return ODDSINV_E_INTERNAL;
}

// Runs `body`, translating any exception into a status and the thread's last error.
template <class Fn>
oddsinv_status guarded(Fn&& body) noexcept {
  try {
    body();
    return ODDSINV_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return ODDSINV_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ODDSINV_E_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return ODDSINV_E_INTERNAL;
  }
}

template <class T>
const T& deref(const T* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string(what) + " is null");
  return *p;
}

template <class T>
T& deref(T* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string(what) + " is null");
  return *p;
}

void require_out(const void* out) {
  if (!out) fail(ErrorCode::invalid_argument, "output pointer is null");
}

Scheme to_scheme(oddsinv_scheme s) {
  switch (s) {
    case ODDSINV_SCHEME_UNCONSTRAINED:
      return Scheme::unconstrained;
    case ODDSINV_SCHEME_CONSTRAINED:
      return Scheme::constrained;
    case ODDSINV_SCHEME_DOUBLE:
      return Scheme::double_constrained;
  }
  fail(ErrorCode::invalid_argument, "unknown scheme");
}

CountVector counts(const uint64_t* x, size_t cells) {
  if (!x && cells) fail(ErrorCode::invalid_argument, "counts are null");
  return CountVector(std::vector<std::uint64_t>(x, x + cells));
}

std::vector<double> doubles(const double* v, size_t n, const char* what) {
  if (!v && n) fail(ErrorCode::invalid_argument, std::string(what) + " is null");
  return std::vector<double>(v, v + n);
}

const WeightedSample& column_of(const oddsinv_sample* s, size_t j) {
  const auto& set = deref(s, "sample");
  if (j >= set.columns.size()) fail(ErrorCode::invalid_argument, "sample column out of range");
  return set.columns[j];
}

void fill_ks(const KsResult& r, oddsinv_ks_result* out) {
  out->statistic = r.statistic;
  out->n1 = r.n1;
  out->n2 = r.n2;
  out->threshold = r.threshold;
  out->significant_at_01 = r.significant_at_01 ? 1 : 0;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* oddsinv_version(void) { return "0.1.0"; }

const char* oddsinv_last_error(void) { return last_error.c_str(); }

const char* oddsinv_status_name(oddsinv_status status) {
  switch (status) {
    case ODDSINV_OK:
      return "ok";
    case ODDSINV_E_INVALID_ARGUMENT:
      return "invalid argument";
    case ODDSINV_E_PARTITION_MISMATCH:
      return "partition mismatch";
    case ODDSINV_E_DOMAIN:
      return "domain error";
    case ODDSINV_E_DEGENERATE:
      return "degenerate input";
    case ODDSINV_E_POLE:
      return "pole";
    case ODDSINV_E_UNRELIABLE:
      return "unreliable result";
    case ODDSINV_E_CONFIG:
      return "config error";
    case ODDSINV_E_IO:
      return "i/o error";
    case ODDSINV_E_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void oddsinv_string_free(char* s) { std::free(s); }

oddsinv_status oddsinv_partition_create(size_t cells, const size_t* block_of,
                                        oddsinv_partition** out) {
  return guarded([&] {
    require_out(out);
    if (!block_of && cells) fail(ErrorCode::invalid_argument, "block assignment is null");
    std::vector<std::vector<std::size_t>> blocks;
    for (size_t i = 0; i < cells; ++i) {
      if (block_of[i] >= cells) fail(ErrorCode::invalid_argument, "block index out of range");
      if (block_of[i] >= blocks.size()) blocks.resize(block_of[i] + 1);
      blocks[block_of[i]].push_back(i);
    }
    *out = new oddsinv_partition{Partition(cells, std::move(blocks))};
  });
}

oddsinv_status oddsinv_partition_rows(size_t rows, size_t cols, oddsinv_partition** out) {
  return guarded([&] {
    require_out(out);
    *out = new oddsinv_partition{Partition::rows(rows, cols)};
  });
}

oddsinv_status oddsinv_partition_columns(size_t rows, size_t cols, oddsinv_partition** out) {
  return guarded([&] {
    require_out(out);
    *out = new oddsinv_partition{Partition::columns(rows, cols)};
  });
}

void oddsinv_partition_destroy(oddsinv_partition* p) { delete p; }

size_t oddsinv_partition_cell_count(const oddsinv_partition* p) {
  return p ? p->value.cell_count() : 0;
}

size_t oddsinv_partition_block_count(const oddsinv_partition* p) {
  return p ? p->value.block_count() : 0;
}

oddsinv_status oddsinv_partition_sums(const oddsinv_partition* p, const uint64_t* x, size_t cells,
                                      uint64_t* out) {
  return guarded([&] {
    require_out(out);
    const auto sums = partition_sums(counts(x, cells), deref(p, "partition").value);
    std::copy(sums.begin(), sums.end(), out);
  });
}

oddsinv_status oddsinv_contrast_create(size_t rows, size_t cols, const double* column_major,
                                       oddsinv_contrast** out) {
  return guarded([&] {
    require_out(out);
    *out = new oddsinv_contrast{
        ContrastMatrix(rows, cols, doubles(column_major, rows * cols, "contrast"))};
  });
}

oddsinv_status oddsinv_contrast_odds_ratio_2x2(oddsinv_contrast** out) {
  return guarded([&] {
    require_out(out);
    *out = new oddsinv_contrast{odds_ratio_2x2()};
  });
}

oddsinv_status oddsinv_contrast_local(size_t rows, size_t cols, size_t i, size_t j,
                                      oddsinv_contrast** out) {
  return guarded([&] {
    require_out(out);
    *out = new oddsinv_contrast{local_odds_ratio(rows, cols, i, j)};
  });
}

oddsinv_status oddsinv_contrast_higher_order(size_t k, oddsinv_contrast** out) {
  return guarded([&] {
    require_out(out);
    *out = new oddsinv_contrast{higher_order_odds_ratio(k)};
  });
}

void oddsinv_contrast_destroy(oddsinv_contrast* c) { delete c; }

size_t oddsinv_contrast_rows(const oddsinv_contrast* c) { return c ? c->value.rows() : 0; }

size_t oddsinv_contrast_cols(const oddsinv_contrast* c) { return c ? c->value.cols() : 0; }

oddsinv_status oddsinv_margin_free(const oddsinv_contrast* c, const oddsinv_partition* p,
                                   int* out) {
  return guarded([&] {
    require_out(out);
    *out = margin_free(deref(c, "contrast").value, deref(p, "partition").value) ? 1 : 0;
  });
}

oddsinv_status oddsinv_margin_free_column(const oddsinv_contrast* c, const oddsinv_partition* p,
                                          size_t j, int* out) {
  return guarded([&] {
    require_out(out);
    *out = margin_free_column(deref(c, "contrast").value, deref(p, "partition").value, j) ? 1 : 0;
  });
}

oddsinv_status oddsinv_sample_size_condition(const oddsinv_contrast* c, const oddsinv_partition* p,
                                             size_t j, uint64_t n, int* out) {
  return guarded([&] {
    require_out(out);
    *out = meets_sample_size_condition(deref(c, "contrast").value, deref(p, "partition").value, j, n)
               ? 1
               : 0;
  });
}

oddsinv_status oddsinv_log_godds(const double* theta, size_t cells, const oddsinv_contrast* c,
                                 double* out) {
  return guarded([&] {
    require_out(out);
    const auto v = log_godds(doubles(theta, cells, "theta"), deref(c, "contrast").value);
    std::copy(v.begin(), v.end(), out);
  });
}

oddsinv_status oddsinv_lgamma(double re, double im, double* out_re, double* out_im) {
  return guarded([&] {
    require_out(out_re);
    require_out(out_im);
    const Complex v = lgamma_complex({re, im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

oddsinv_status oddsinv_cf_logpsi(double t, const double* alpha, const uint64_t* x, size_t cells,
                                 const oddsinv_contrast* c, size_t j, const oddsinv_partition* p,
                                 oddsinv_scheme scheme, double* out_re, double* out_im) {
  return guarded([&] {
    require_out(out_re);
    require_out(out_im);
    const auto& contrast = deref(c, "contrast").value;
    if (j >= contrast.cols()) fail(ErrorCode::invalid_argument, "contrast column out of range");
    const Complex v = cf_logpsi_dirichlet(t, DirichletPrior(doubles(alpha, cells, "alpha")),
                                          counts(x, cells), contrast.column(j),
                                          deref(p, "partition").value, to_scheme(scheme));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

oddsinv_status oddsinv_cf_dependent(double t, const double* alpha, const uint64_t* x,
                                    oddsinv_scheme scheme, double* out_re, double* out_im) {
  return guarded([&] {
    require_out(out_re);
    require_out(out_im);
    const auto a = doubles(alpha, 4, "alpha");
    const Complex v = cf_dependent_example(t, a, counts(x, 4), to_scheme(scheme));
    *out_re = v.real();
    *out_im = v.imag();
  });
}

oddsinv_status oddsinv_fnch_log_pmf(uint64_t a, uint64_t n1, uint64_t n2, uint64_t m1, double psi,
                                    double* out) {
  return guarded([&] {
    require_out(out);
    *out = fnch_log_pmf(a, FnchParams{n1, n2, m1, psi});
  });
}

oddsinv_status oddsinv_rng_create(uint64_t seed, uint64_t stream, oddsinv_rng** out) {
  return guarded([&] {
    require_out(out);
    *out = new oddsinv_rng{Rng(seed, stream)};
  });
}

void oddsinv_rng_destroy(oddsinv_rng* rng) { delete rng; }

oddsinv_status oddsinv_rng_uniform(oddsinv_rng* rng, double* out) {
  return guarded([&] {
    require_out(out);
    *out = deref(rng, "rng").value.uniform();
  });
}

oddsinv_status oddsinv_sample_posterior(oddsinv_scheme scheme, const double* alpha,
                                        const uint64_t* x, size_t cells,
                                        const oddsinv_partition* p, const oddsinv_contrast* c,
                                        size_t draws, oddsinv_rng* rng, oddsinv_sample** out) {
  return guarded([&] {
    require_out(out);
    const DirichletPrior prior(doubles(alpha, cells, "alpha"));
    const CountVector data = counts(x, cells);
    const auto& contrast = deref(c, "contrast").value;
    Rng& gen = deref(rng, "rng").value;
    auto result = std::make_unique<oddsinv_sample>();
    switch (to_scheme(scheme)) {
      case Scheme::unconstrained:
        result->columns = posterior_unconstrained(prior, data, contrast, draws, gen);
        break;
      case Scheme::constrained:
        result->columns =
            posterior_constrained(prior, data, deref(p, "partition").value, contrast, draws, gen);
        break;
      case Scheme::double_constrained:
        if (cells != 4 || !(contrast == odds_ratio_2x2()))
          fail(ErrorCode::invalid_argument,
               "the doubly constrained posterior is defined for the 2x2 odds ratio");
        result->columns.push_back(posterior_double_constrained(prior, data, draws, gen));
        break;
    }
    *out = result.release();
  });
}

oddsinv_status oddsinv_sample_dependent(const double* alpha, const uint64_t* x,
                                        oddsinv_scheme scheme, size_t draws, oddsinv_rng* rng,
                                        oddsinv_sample** out) {
  return guarded([&] {
    require_out(out);
    const auto a = doubles(alpha, 4, "alpha");
    auto result = std::make_unique<oddsinv_sample>();
    result->columns.push_back(posterior_dependent_example(a, counts(x, 4), to_scheme(scheme), draws,
                                                          deref(rng, "rng").value));
    *out = result.release();
  });
}

void oddsinv_sample_destroy(oddsinv_sample* s) { delete s; }

size_t oddsinv_sample_columns(const oddsinv_sample* s) { return s ? s->columns.size() : 0; }

size_t oddsinv_sample_size(const oddsinv_sample* s) {
  return s && !s->columns.empty() ? s->columns.front().size() : 0;
}

oddsinv_status oddsinv_sample_values(const oddsinv_sample* s, size_t j, double* out) {
  return guarded([&] {
    require_out(out);
    const auto& col = column_of(s, j);
    std::copy(col.values.begin(), col.values.end(), out);
  });
}

oddsinv_status oddsinv_sample_weights(const oddsinv_sample* s, size_t j, double* out) {
  return guarded([&] {
    require_out(out);
    const auto& col = column_of(s, j);
    std::copy(col.weights.begin(), col.weights.end(), out);
  });
}

oddsinv_status oddsinv_sample_ess(const oddsinv_sample* s, size_t j, double* out) {
  return guarded([&] {
    require_out(out);
    *out = column_of(s, j).effective_sample_size();
  });
}

oddsinv_status oddsinv_sample_degenerate(const oddsinv_sample* s, size_t j, int* out) {
  return guarded([&] {
    require_out(out);
    *out = column_of(s, j).degenerate_weights ? 1 : 0;
  });
}

oddsinv_status oddsinv_ks_two_sample(const double* a, size_t na, const double* b, size_t nb,
                                     oddsinv_ks_result* out) {
  return guarded([&] {
    require_out(out);
    if ((!a && na) || (!b && nb)) fail(ErrorCode::invalid_argument, "sample is null");
    fill_ks(ks_two_sample({a, na}, {b, nb}), out);
  });
}

oddsinv_status oddsinv_ks_weighted(const oddsinv_sample* a, size_t ja, const oddsinv_sample* b,
                                   size_t jb, oddsinv_ks_result* out) {
  return guarded([&] {
    require_out(out);
    fill_ks(ks_weighted(column_of(a, ja), column_of(b, jb)), out);
  });
}

oddsinv_status oddsinv_config_load(const char* path, oddsinv_config** out) {
  return guarded([&] {
    require_out(out);
    if (!path) fail(ErrorCode::invalid_argument, "path is null");
    *out = new oddsinv_config{ExperimentConfig::load(path)};
  });
}

oddsinv_status oddsinv_config_parse(const char* json_text, oddsinv_config** out) {
  return guarded([&] {
    require_out(out);
    if (!json_text) fail(ErrorCode::invalid_argument, "config text is null");
    *out = new oddsinv_config{ExperimentConfig::from_json(json_text)};
  });
}

void oddsinv_config_destroy(oddsinv_config* cfg) { delete cfg; }

oddsinv_status oddsinv_config_to_json(const oddsinv_config* cfg, char** out) {
  return guarded([&] {
    require_out(out);
    *out = duplicate(deref(cfg, "config").value.to_json());
  });
}

oddsinv_status oddsinv_config_validate(const oddsinv_config* cfg) {
  return guarded([&] { deref(cfg, "config").value.validate(); });
}

oddsinv_status oddsinv_config_set_seed(oddsinv_config* cfg, uint64_t seed) {
  return guarded([&] { deref(cfg, "config").value.seed = seed; });
}

oddsinv_status oddsinv_config_set_samples(oddsinv_config* cfg, size_t samples) {
  return guarded([&] {
    if (samples < 2) fail(ErrorCode::config, "samples must be at least 2");
    deref(cfg, "config").value.samples = samples;
  });
}

oddsinv_status oddsinv_config_set_t_grid(oddsinv_config* cfg, double tmin, double tmax,
                                         size_t points) {
  return guarded([&] {
    auto& grid = deref(cfg, "config").value.t_grid;
    if (points == 0 || !(tmax > tmin)) fail(ErrorCode::config, "t grid needs points >= 1 and max > min");
    grid = TGridSpec{tmin, tmax, points};
  });
}

oddsinv_status oddsinv_config_get_t_grid(const oddsinv_config* cfg, double* tmin, double* tmax,
                                         size_t* points) {
  return guarded([&] {
    require_out(tmin);
    require_out(tmax);
    require_out(points);
    const auto& grid = deref(cfg, "config").value.t_grid;
    *tmin = grid.tmin;
    *tmax = grid.tmax;
    *points = grid.points;
  });
}

oddsinv_status oddsinv_config_set_out_dir(oddsinv_config* cfg, const char* dir) {
  return guarded([&] {
    if (!dir || !*dir) fail(ErrorCode::config, "output directory is empty");
    deref(cfg, "config").value.out_dir = dir;
  });
}

oddsinv_status oddsinv_config_set_schemes(oddsinv_config* cfg, const oddsinv_scheme* schemes,
                                          size_t count) {
  return guarded([&] {
    if (!schemes || count == 0) fail(ErrorCode::config, "at least one scheme is required");
    std::vector<Scheme> list;
    for (size_t k = 0; k < count; ++k) list.push_back(to_scheme(schemes[k]));
    deref(cfg, "config").value.schemes = std::move(list);
  });
}

oddsinv_status oddsinv_config_set_prior_kind(oddsinv_config* cfg, oddsinv_prior_kind kind) {
  return guarded([&] {
    auto& c = deref(cfg, "config").value;
    if (kind == ODDSINV_PRIOR_DIRICHLET)
      c.prior = PriorKind::dirichlet;
    else if (kind == ODDSINV_PRIOR_DEPENDENT)
      c.prior = PriorKind::dependent;
    else
      fail(ErrorCode::invalid_argument, "unknown prior kind");
  });
}

oddsinv_status oddsinv_run(const char* command, const oddsinv_config* cfg, oddsinv_report** out) {
  return guarded([&] {
    require_out(out);
    if (!command) fail(ErrorCode::invalid_argument, "command is null");
    *out = new oddsinv_report{run_command(command, deref(cfg, "config").value)};
  });
}

void oddsinv_report_destroy(oddsinv_report* r) { delete r; }

int oddsinv_report_exit_code(const oddsinv_report* r) { return r ? r->value.exit_code : 1; }

const char* oddsinv_report_text(const oddsinv_report* r) {
  return r ? r->value.report.c_str() : "";
}

size_t oddsinv_report_file_count(const oddsinv_report* r) { return r ? r->value.files.size() : 0; }

const char* oddsinv_report_file(const oddsinv_report* r, size_t i) {
  return r && i < r->value.files.size() ? r->value.files[i].c_str() : nullptr;
}

}  // extern "C"
