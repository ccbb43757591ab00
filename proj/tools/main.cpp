// Command-line interface for the null-curve geometry library.  All geometry
// goes through the C API in nbc/nbc.h; this file only does argument parsing,
// gating, table/report formatting, and file plumbing.
//
// Exit codes: 0 success; 1 validation or mate-condition failure; 2 degenerate
// curve; 3 spec parse or I/O failure (including command-line misuse).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbc/nbc.h"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitValidation = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitParseIo = 3;

int exit_for(nbc_status status) {
  switch (status) {
    case NBC_OK:
      return 0;
    case NBC_ERR_LEX:
    case NBC_ERR_PARSE:
    case NBC_ERR_IO:
      return kExitParseIo;
    case NBC_ERR_DEGENERATE:
      return kExitDegenerate;
    default:
      return kExitValidation;
  }
}

[[nodiscard]] int fail(nbc_status status, const std::string& context) {
  std::cerr << "error (" << nbc_status_name(status) << "): " << context;
  const char* detail = nbc_last_error();
  if (detail != nullptr && detail[0] != '\0') std::cerr << ": " << detail;
  std::cerr << "\n";
  return exit_for(status);
}

std::string fmt(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

// Owns an nbc_curve handle.
class CurveHandle {
 public:
  CurveHandle() = default;
  explicit CurveHandle(nbc_curve* handle) : handle_(handle) {}
  ~CurveHandle() { nbc_curve_free(handle_); }
  CurveHandle(const CurveHandle&) = delete;
  CurveHandle& operator=(const CurveHandle&) = delete;
  CurveHandle(CurveHandle&& other) noexcept : handle_(other.release()) {}
  CurveHandle& operator=(CurveHandle&& other) noexcept {
    if (this != &other) {
      nbc_curve_free(handle_);
      handle_ = other.release();
    }
    return *this;
  }

  nbc_curve* get() const { return handle_; }
  nbc_curve** out() {
    nbc_curve_free(handle_);
    handle_ = nullptr;
    return &handle_;
  }
  nbc_curve* release() {
    nbc_curve* h = handle_;
    handle_ = nullptr;
    return h;
  }
  explicit operator bool() const { return handle_ != nullptr; }

 private:
  nbc_curve* handle_ = nullptr;
};

struct CommonConfig {
  int samples = 64;
  std::optional<std::pair<double, double>> range;
  nbc_options options{};
  std::string format;  // "csv" or "structured-text"
  std::string output;  // empty = stdout
};

void add_common_flags(CLI::App* cmd, CommonConfig& cfg,
                      const std::string& default_format) {
  cfg.format = default_format;
  nbc_options_init(&cfg.options);
  cmd->add_option("--samples", cfg.samples, "Grid sample count")
      ->default_val(64)
      ->check(CLI::Range(2, 1000000));
  cmd->add_option_function<std::string>(
         "--range",
         [&cfg](const std::string& text) {
           auto colon = text.find(':');
           if (colon == std::string::npos)
             throw CLI::ValidationError("--range", "expected lo:hi");
           try {
             double lo = std::stod(text.substr(0, colon));
             double hi = std::stod(text.substr(colon + 1));
             if (!(lo < hi))
               throw CLI::ValidationError("--range", "needs lo < hi");
             cfg.range = {lo, hi};
           } catch (const std::invalid_argument&) {
             throw CLI::ValidationError("--range", "expected numbers lo:hi");
           }
         },
         "Parameter range lo:hi (subset of the curve domain)");
  cmd->add_option("--order", cfg.options.jet_order,
                  "Taylor expansion order for frame work")
      ->default_val(10)
      ->check(CLI::Range(5, 64));
  cmd->add_option("--tol-gram", cfg.options.tol_gram,
                  "Frame Gram-matrix residual tolerance")
      ->default_val(1e-8);
  cmd->add_option("--tol-frenet", cfg.options.tol_frenet,
                  "Frame-derivative residual tolerance")
      ->default_val(1e-8);
  cmd->add_option("--tol-cond", cfg.options.tol_condition,
                  "Mate-condition residual tolerance")
      ->default_val(1e-8);
  cmd->add_option("--tol-pseudo-arc", cfg.options.tol_pseudo_arc,
                  "Pseudo-arc acceptance tolerance")
      ->default_val(1e-8);
  cmd->add_option("--tol-degenerate", cfg.options.tol_degenerate,
                  "Degeneracy threshold on the frame vector norm")
      ->default_val(1e-10);
  cmd->add_option("--tol-ell0", cfg.options.tol_ell0,
                  "Relative constancy tolerance for ds_bar/ds")
      ->default_val(1e-8);
  cmd->add_option("--tol-mate", cfg.options.tol_mate,
                  "Predicted-vs-measured mate tolerance")
      ->default_val(1e-6);
  cmd->add_option("--tol-quadrature", cfg.options.quadrature_tol,
                  "Absolute quadrature tolerance")
      ->default_val(1e-10);
  cmd->add_option("--output", cfg.output, "Write output to this file");
  cmd->add_option("--format", cfg.format, "Output format")
      ->default_val(default_format)
      ->check(CLI::IsMember({"csv", "structured-text"}));
}

int write_text(const std::string& output_path, const std::string& text) {
  if (output_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    std::cerr << "error (io-error): cannot open '" << output_path
              << "' for writing\n";
    return kExitParseIo;
  }
  out << text;
  out.flush();
  if (!out) {
    std::cerr << "error (io-error): failed writing '" << output_path << "'\n";
    return kExitParseIo;
  }
  return 0;
}

std::vector<double> make_grid(double lo, double hi, int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    grid[static_cast<std::size_t>(i)] =
        i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(n - 1);
  return grid;
}

// Validates the curve (null direction, bending, pseudo-arc unit speed) and,
// for `general`-declared curves that are not unit-speed, swaps in the
// pseudo-arc reparametrization.  Returns 0 to continue, else the exit code.
int gate_curve(CurveHandle& curve, const CommonConfig& cfg) {
  double worst_null = 0.0, worst_unit = 0.0, min_accel = 0.0;
  nbc_status status = nbc_validate(curve.get(), &cfg.options, cfg.samples,
                                   &worst_null, &worst_unit, &min_accel);
  if (status != NBC_OK) return fail(status, "validating curve");
  if (worst_null > cfg.options.tol_pseudo_arc) {
    std::cerr << "error (pseudo-arc-violation): curve is not null: max "
                 "|<c',c'>| = "
              << fmt(worst_null) << " exceeds " << fmt(cfg.options.tol_pseudo_arc)
              << "\n";
    return kExitValidation;
  }
  if (min_accel < cfg.options.tol_degenerate) {
    std::cerr << "error (degenerate-curve): <c'',c''> reaches "
              << fmt(min_accel)
              << "; the curve does not bend and carries no frame\n";
    return kExitDegenerate;
  }
  if (worst_unit > cfg.options.tol_pseudo_arc) {
    if (nbc_curve_is_pseudo_arc(curve.get())) {
      std::cerr << "error (pseudo-arc-violation): curve declared pseudo_arc "
                   "but max |<c'',c''> - 1| = "
                << fmt(worst_unit) << " exceeds "
                << fmt(cfg.options.tol_pseudo_arc) << "\n";
      return kExitValidation;
    }
    CurveHandle reparam;
    status = nbc_reparametrize_pseudo_arc(curve.get(), &cfg.options,
                                          reparam.out());
    if (status != NBC_OK) return fail(status, "reparametrizing by pseudo-arc");
    curve = std::move(reparam);
  }
  return 0;
}

int resolve_grid(const CurveHandle& curve, const CommonConfig& cfg,
                 std::vector<double>& grid) {
  double lo = 0.0, hi = 0.0;
  nbc_curve_domain(curve.get(), &lo, &hi);
  if (cfg.range) {
    double slack = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (cfg.range->first < lo - slack || cfg.range->second > hi + slack) {
      std::cerr << "error (range-error): requested range ["
                << fmt(cfg.range->first) << ", " << fmt(cfg.range->second)
                << "] is not inside the curve domain [" << fmt(lo) << ", "
                << fmt(hi) << "]\n";
      return kExitValidation;
    }
    lo = cfg.range->first;
    hi = cfg.range->second;
  }
  grid = make_grid(lo, hi, cfg.samples);
  return 0;
}

// --- frame ------------------------------------------------------------------

int cmd_frame(const std::string& spec_path, const CommonConfig& cfg) {
  CurveHandle curve;
  nbc_status status = nbc_curve_from_file(spec_path.c_str(), curve.out());
  if (status != NBC_OK) return fail(status, "loading '" + spec_path + "'");
  if (int code = gate_curve(curve, cfg); code != 0) return code;

  std::vector<double> grid;
  if (int code = resolve_grid(curve, cfg, grid); code != 0) return code;

  struct Row {
    double s;
    nbc_frame frame;
    nbc_status status;
  };
  std::vector<Row> rows;
  rows.reserve(grid.size());
  int failures = 0;
  nbc_status first_failure = NBC_OK;
  for (double s : grid) {
    Row row{};
    row.s = s;
    row.status = nbc_frame_at(curve.get(), &cfg.options, s, &row.frame);
    if (row.status != NBC_OK) {
      ++failures;
      if (first_failure == NBC_OK) first_failure = row.status;
    }
    rows.push_back(row);
  }

  std::ostringstream out;
  if (cfg.format == "csv") {
    out << "s,k1,k2,L0,L1,L2,L3,N0,N1,N2,N3,W1_0,W1_1,W1_2,W1_3,"
           "W2_0,W2_1,W2_2,W2_3,gram_residual,frenet_residual,"
           "orientation_det,status\n";
    for (const Row& row : rows) {
      out << fmt(row.s);
      if (row.status == NBC_OK) {
        const nbc_frame& f = row.frame;
        out << ',' << fmt(f.k1) << ',' << fmt(f.k2);
        for (const double* vec : {f.L, f.N, f.W1, f.W2})
          for (int i = 0; i < 4; ++i) out << ',' << fmt(vec[i]);
        out << ',' << fmt(f.gram_residual) << ',' << fmt(f.frenet_residual)
            << ',' << fmt(f.orientation_det) << ",ok\n";
      } else {
        for (int i = 0; i < 21; ++i) out << ',';
        out << ',' << nbc_status_name(row.status) << '\n';
      }
    }
  } else {
    ordered_json doc;
    doc["curve"] = nbc_curve_name(curve.get());
    doc["rows"] = ordered_json::array();
    for (const Row& row : rows) {
      ordered_json r;
      r["s"] = row.s;
      if (row.status == NBC_OK) {
        const nbc_frame& f = row.frame;
        r["k1"] = f.k1;
        r["k2"] = f.k2;
        r["L"] = {f.L[0], f.L[1], f.L[2], f.L[3]};
        r["N"] = {f.N[0], f.N[1], f.N[2], f.N[3]};
        r["W1"] = {f.W1[0], f.W1[1], f.W1[2], f.W1[3]};
        r["W2"] = {f.W2[0], f.W2[1], f.W2[2], f.W2[3]};
        r["gram_residual"] = f.gram_residual;
        r["frenet_residual"] = f.frenet_residual;
        r["orientation_det"] = f.orientation_det;
        r["status"] = "ok";
      } else {
        r["status"] = nbc_status_name(row.status);
      }
      doc["rows"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
  }

  if (int code = write_text(cfg.output, out.str()); code != 0) return code;
  if (failures == static_cast<int>(rows.size()) && !rows.empty()) {
    std::cerr << "error (" << nbc_status_name(first_failure)
              << "): no grid point admits a frame\n";
    return exit_for(first_failure);
  }
  return 0;
}

// --- classify ----------------------------------------------------------------

struct ClassifyConfig {
  CommonConfig common;
  std::optional<double> alpha;
  std::optional<double> beta;
  bool fit = false;
};

void flatten_csv(const ordered_json& doc, const std::string& prefix,
                 std::ostream& out) {
  for (const auto& [key, value] : doc.items()) {
    std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten_csv(value, name, out);
    } else if (value.is_number_float()) {
      out << name << ',' << fmt(value.get<double>()) << '\n';
    } else if (value.is_boolean()) {
      out << name << ',' << (value.get<bool>() ? "true" : "false") << '\n';
    } else if (value.is_string()) {
      out << name << ',' << value.get<std::string>() << '\n';
    } else {
      out << name << ',' << value.dump() << '\n';
    }
  }
}

int cmd_classify(const std::string& spec_path, const ClassifyConfig& cfg) {
  CurveHandle curve;
  nbc_status status = nbc_curve_from_file(spec_path.c_str(), curve.out());
  if (status != NBC_OK) return fail(status, "loading '" + spec_path + "'");
  if (int code = gate_curve(curve, cfg.common); code != 0) return code;

  std::vector<double> grid;
  if (int code = resolve_grid(curve, cfg.common, grid); code != 0) return code;
  int n = static_cast<int>(grid.size());

  ordered_json doc;
  doc["curve"] = nbc_curve_name(curve.get());

  bool have_constants = cfg.alpha.has_value() || cfg.fit;
  nbc_obstruction obstruction{};
  status = nbc_classical_obstruction(curve.get(), &cfg.common.options,
                                     grid.data(), n, &obstruction);
  if (status == NBC_OK) {
    ordered_json o;
    o["alpha_forced"] = obstruction.alpha_forced;
    o["obstruction"] = obstruction.obstruction;
    o["k1_mean"] = obstruction.k1_mean;
    o["k1_variation"] = obstruction.k1_variation;
    o["k1_constant"] = obstruction.k1_constant != 0;
    o["classical_mate_possible"] = false;
    doc["obstruction"] = std::move(o);
  } else if (!have_constants) {
    return fail(status, "computing the classical-mate obstruction");
  } else {
    doc["obstruction"] = {{"error", nbc_last_error()},
                          {"status", nbc_status_name(status)}};
  }

  double alpha = 0.0, beta = 0.0;
  bool run_condition = false;
  if (cfg.fit) {
    nbc_fit fit{};
    status = nbc_fit_constants(curve.get(), &cfg.common.options, grid.data(), n,
                               &fit);
    if (status != NBC_OK) return fail(status, "fitting mate constants");
    ordered_json f;
    f["alpha"] = fit.alpha;
    f["beta"] = fit.beta;
    f["residual"] = fit.residual;
    f["underdetermined"] = fit.underdetermined != 0;
    if (fit.underdetermined != 0) {
      f["line_direction"] = {fit.dir_alpha, fit.dir_beta};
      f["line_note"] =
          "every (alpha, beta) = (alpha0, beta0) + t*direction fits";
    }
    doc["fit"] = std::move(f);
    alpha = fit.alpha;
    beta = fit.beta;
    run_condition = true;
  } else if (cfg.alpha.has_value()) {
    alpha = *cfg.alpha;
    beta = *cfg.beta;
    run_condition = true;
  }

  if (run_condition) {
    nbc_condition cond{};
    status = nbc_check_condition(curve.get(), &cfg.common.options, alpha, beta,
                                 grid.data(), n, &cond);
    if (status != NBC_OK) return fail(status, "checking the mate condition");
    ordered_json c;
    c["case"] = cond.which == 1 ? "I" : cond.which == 2 ? "II" : "none";
    c["alpha"] = cond.alpha;
    c["beta"] = cond.beta;
    c["condition_residual"] = cond.condition_residual;
    if (cond.which != 2) c["case1_margin"] = cond.case1_margin;
    if (cond.which != 0) {
      c["ell0"] = cond.ell0;
      c["ell0_residual"] = cond.ell0_residual;
      c["cartan_mate_feasible"] = cond.cartan_mate_feasible != 0;
    }
    doc["condition"] = std::move(c);
  }

  std::ostringstream out;
  if (cfg.common.format == "csv")
    flatten_csv(doc, "", out);
  else
    out << doc.dump(2) << '\n';
  return write_text(cfg.common.output, out.str());
}

// --- mate ---------------------------------------------------------------------

struct MateConfig {
  CommonConfig common;
  std::optional<double> alpha;
  std::optional<double> beta;
  bool fit = false;
  std::string plot;
};

int cmd_mate(const std::string& spec_path, const MateConfig& cfg) {
  CurveHandle curve;
  nbc_status status = nbc_curve_from_file(spec_path.c_str(), curve.out());
  if (status != NBC_OK) return fail(status, "loading '" + spec_path + "'");
  if (int code = gate_curve(curve, cfg.common); code != 0) return code;

  std::vector<double> grid;
  if (int code = resolve_grid(curve, cfg.common, grid); code != 0) return code;
  int n = static_cast<int>(grid.size());

  double alpha = 0.0, beta = 0.0;
  if (cfg.fit) {
    nbc_fit fit{};
    status = nbc_fit_constants(curve.get(), &cfg.common.options, grid.data(), n,
                               &fit);
    if (status != NBC_OK) return fail(status, "fitting mate constants");
    alpha = fit.alpha;
    beta = fit.beta;
  } else {
    alpha = *cfg.alpha;
    beta = *cfg.beta;
  }

  std::vector<nbc_mate_row> rows(static_cast<std::size_t>(n));
  nbc_mate_report report{};
  CurveHandle mate;
  status = nbc_construct_mate(curve.get(), &cfg.common.options, alpha, beta,
                              grid.data(), n, mate.out(), &report, rows.data());
  if (status != NBC_OK) return fail(status, "constructing the mate");

  std::ostringstream out;
  if (cfg.common.format == "csv") {
    out << "s,s_bar,k1_bar_pred,k1_bar_meas,abs_k2_bar_pred,k2_bar_meas,"
           "plane_residual,L_rel_residual,N_rel_residual\n";
    for (const nbc_mate_row& row : rows)
      out << fmt(row.s) << ',' << fmt(row.s_bar) << ',' << fmt(row.k1_bar_pred)
          << ',' << fmt(row.k1_bar_meas) << ',' << fmt(row.abs_k2_bar_pred)
          << ',' << fmt(row.k2_bar_meas) << ',' << fmt(row.plane_residual)
          << ',' << fmt(row.L_rel_residual) << ',' << fmt(row.N_rel_residual)
          << '\n';
  } else {
    ordered_json doc;
    doc["curve"] = nbc_curve_name(curve.get());
    doc["mate"] = nbc_curve_name(mate.get());
    doc["case"] = report.which == 1 ? "I" : "II";
    doc["alpha"] = report.alpha;
    doc["beta"] = report.beta;
    doc["ell0"] = report.ell0;
    doc["ell0_constancy_residual"] = report.ell0_constancy_residual;
    doc["predicted_k1_bar"] = report.predicted_k1_bar;
    doc["predicted_abs_k2_bar"] = report.predicted_abs_k2_bar;
    doc["measured_k1_bar"] = report.measured_k1_bar;
    doc["measured_k2_bar"] = report.measured_k2_bar;
    doc["rotation_angle"] = report.rotation_angle;
    doc["plane_coincidence_residual"] = report.plane_coincidence_residual;
    doc["L_relation_residual"] = report.L_relation_residual;
    doc["N_relation_residual"] = report.N_relation_residual;
    doc["max_k1_error"] = report.max_k1_error;
    doc["max_abs_k2_error"] = report.max_abs_k2_error;
    doc["verification"] = ordered_json::array();
    for (const nbc_mate_row& row : rows) {
      ordered_json r;
      r["s"] = row.s;
      r["s_bar"] = row.s_bar;
      r["k1_bar_pred"] = row.k1_bar_pred;
      r["k1_bar_meas"] = row.k1_bar_meas;
      r["abs_k2_bar_pred"] = row.abs_k2_bar_pred;
      r["k2_bar_meas"] = row.k2_bar_meas;
      r["plane_residual"] = row.plane_residual;
      r["L_rel_residual"] = row.L_rel_residual;
      r["N_rel_residual"] = row.N_rel_residual;
      doc["verification"].push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
  }

  if (!cfg.plot.empty()) {
    std::ostringstream plot;
    plot << "s_bar,x0,x1,x2,x3\n";
    for (const nbc_mate_row& row : rows) {
      double position[4] = {0, 0, 0, 0};
      status = nbc_curve_eval(mate.get(), &cfg.common.options, row.s_bar, 0,
                              position);
      if (status != NBC_OK) return fail(status, "sampling the mate for --plot");
      plot << fmt(row.s_bar);
      for (double x : position) plot << ',' << fmt(x);
      plot << '\n';
    }
    if (int code = write_text(cfg.plot, plot.str()); code != 0) return code;
  }

  return write_text(cfg.common.output, out.str());
}

// --- verify --------------------------------------------------------------------

struct VerifyRow {
  std::string file;
  std::string name;
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  std::optional<double> worst_null, worst_unit, max_gram, max_frenet;
  std::optional<double> obstruction;
  std::string mate_case;
  std::optional<double> mate_k1_err, mate_k2_err, mate_plane;

  bool ok() const { return failures.empty(); }
};

std::string sanitize(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return text;
}

VerifyRow verify_one(const std::filesystem::path& path,
                     const CommonConfig& cfg) {
  VerifyRow row;
  row.file = path.filename().string();

  CurveHandle curve;
  nbc_status status = nbc_curve_from_file(path.string().c_str(), curve.out());
  if (status != NBC_OK) {
    row.failures.push_back(nbc_status_name(status));
    row.notes.push_back(nbc_last_error());
    return row;
  }
  row.name = nbc_curve_name(curve.get());

  double worst_null = 0.0, worst_unit = 0.0, min_accel = 0.0;
  status = nbc_validate(curve.get(), &cfg.options, cfg.samples, &worst_null,
                        &worst_unit, &min_accel);
  if (status != NBC_OK) {
    row.failures.push_back(nbc_status_name(status));
    row.notes.push_back(nbc_last_error());
    return row;
  }
  row.worst_null = worst_null;
  row.worst_unit = worst_unit;
  if (worst_null > cfg.options.tol_pseudo_arc) {
    row.failures.push_back("null");
    return row;
  }
  if (min_accel < cfg.options.tol_degenerate) {
    row.failures.push_back("degenerate-curve");
    row.notes.push_back("<c'',c''> reaches " + fmt(min_accel));
    return row;
  }
  if (worst_unit > cfg.options.tol_pseudo_arc) {
    if (nbc_curve_is_pseudo_arc(curve.get())) {
      row.failures.push_back("pseudo-arc");
      return row;
    }
    CurveHandle reparam;
    status =
        nbc_reparametrize_pseudo_arc(curve.get(), &cfg.options, reparam.out());
    if (status != NBC_OK) {
      row.failures.push_back(nbc_status_name(status));
      row.notes.push_back(nbc_last_error());
      return row;
    }
    curve = std::move(reparam);
    row.notes.push_back("reparametrized by pseudo-arc");
  }

  double lo = 0.0, hi = 0.0;
  nbc_curve_domain(curve.get(), &lo, &hi);
  std::vector<double> grid = make_grid(lo, hi, cfg.samples);
  int n = static_cast<int>(grid.size());

  double max_gram = 0.0, max_frenet = 0.0;
  for (double s : grid) {
    nbc_frame frame{};
    status = nbc_frame_at(curve.get(), &cfg.options, s, &frame);
    if (status != NBC_OK) {
      row.failures.push_back(nbc_status_name(status));
      row.notes.push_back("at s = " + fmt(s) + ": " + nbc_last_error());
      return row;
    }
    max_gram = std::max(max_gram, frame.gram_residual);
    max_frenet = std::max(max_frenet, frame.frenet_residual);
  }
  row.max_gram = max_gram;
  row.max_frenet = max_frenet;
  if (max_gram > cfg.options.tol_gram) row.failures.push_back("gram");
  if (max_frenet > cfg.options.tol_frenet) row.failures.push_back("frenet");

  nbc_obstruction obstruction{};
  status = nbc_classical_obstruction(curve.get(), &cfg.options, grid.data(), n,
                                     &obstruction);
  if (status == NBC_OK) {
    row.obstruction = obstruction.obstruction;
    // A genuine 4-bending curve always certifies the classical-mate
    // impossibility with a safely positive residual.
    if (obstruction.obstruction <= 0.5) row.failures.push_back("obstruction");
  } else {
    row.notes.push_back(std::string("obstruction skipped: ") +
                        nbc_last_error());
  }

  nbc_fit fit{};
  status = nbc_fit_constants(curve.get(), &cfg.options, grid.data(), n, &fit);
  if (status == NBC_OK) {
    nbc_mate_report report{};
    status = nbc_construct_mate(curve.get(), &cfg.options, fit.alpha, fit.beta,
                                grid.data(), n, nullptr, &report, nullptr);
    if (status == NBC_OK) {
      row.mate_case = report.which == 1 ? "I" : "II";
      row.mate_k1_err = report.max_k1_error;
      row.mate_k2_err = report.max_abs_k2_error;
      row.mate_plane = report.plane_coincidence_residual;
      if (report.max_k1_error > cfg.options.tol_mate ||
          report.max_abs_k2_error > cfg.options.tol_mate ||
          report.plane_coincidence_residual > cfg.options.tol_mate ||
          report.L_relation_residual > cfg.options.tol_mate ||
          report.N_relation_residual > cfg.options.tol_mate)
        row.failures.push_back("mate");
    } else {
      row.mate_case = "infeasible";
      row.notes.push_back(std::string("mate skipped: ") + nbc_last_error());
    }
  } else {
    row.mate_case = "n/a";
    row.notes.push_back(std::string("fit skipped: ") + nbc_last_error());
  }
  return row;
}

int cmd_verify(const std::string& dir, const CommonConfig& cfg, int jobs) {
  std::error_code ec;
  std::vector<std::filesystem::path> inputs;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json")
      inputs.push_back(entry.path());
  }
  if (ec) {
    std::cerr << "error (io-error): cannot read directory '" << dir
              << "': " << ec.message() << "\n";
    return kExitParseIo;
  }
  std::sort(inputs.begin(), inputs.end());
  if (inputs.empty()) {
    std::cerr << "error (io-error): no inputs: '" << dir
              << "' contains no .json curve specs\n";
    return kExitValidation;
  }

  std::vector<VerifyRow> rows(inputs.size());
  int worker_count = std::max(1, std::min<int>(jobs, static_cast<int>(inputs.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= inputs.size()) break;
      rows[i] = verify_one(inputs[i], cfg);
    }
  };
  if (worker_count == 1) {
    work();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(worker_count));
    for (int i = 0; i < worker_count; ++i) workers.emplace_back(work);
    for (std::thread& w : workers) w.join();
  }

  auto opt_fmt = [](const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
  };

  std::ostringstream out;
  bool all_ok = true;
  if (cfg.format == "csv") {
    out << "file,name,status,worst_null,worst_unit,max_gram,max_frenet,"
           "obstruction,mate_case,mate_k1_err,mate_k2_err,mate_plane,detail\n";
    for (const VerifyRow& row : rows) {
      all_ok = all_ok && row.ok();
      std::string status = "ok";
      if (!row.ok()) {
        status = "fail(";
        for (std::size_t i = 0; i < row.failures.size(); ++i)
          status += (i != 0 ? "+" : "") + row.failures[i];
        status += ")";
      }
      std::string detail;
      for (std::size_t i = 0; i < row.notes.size(); ++i)
        detail += (i != 0 ? "; " : "") + row.notes[i];
      out << sanitize(row.file) << ',' << sanitize(row.name) << ',' << status
          << ',' << opt_fmt(row.worst_null) << ',' << opt_fmt(row.worst_unit)
          << ',' << opt_fmt(row.max_gram) << ',' << opt_fmt(row.max_frenet)
          << ',' << opt_fmt(row.obstruction) << ',' << row.mate_case << ','
          << opt_fmt(row.mate_k1_err) << ',' << opt_fmt(row.mate_k2_err) << ','
          << opt_fmt(row.mate_plane) << ',' << sanitize(detail) << '\n';
    }
  } else {
    ordered_json doc = ordered_json::array();
    for (const VerifyRow& row : rows) {
      all_ok = all_ok && row.ok();
      ordered_json r;
      r["file"] = row.file;
      r["name"] = row.name;
      r["ok"] = row.ok();
      if (!row.failures.empty()) r["failures"] = row.failures;
      if (row.worst_null) r["worst_null"] = *row.worst_null;
      if (row.worst_unit) r["worst_unit"] = *row.worst_unit;
      if (row.max_gram) r["max_gram"] = *row.max_gram;
      if (row.max_frenet) r["max_frenet"] = *row.max_frenet;
      if (row.obstruction) r["obstruction"] = *row.obstruction;
      if (!row.mate_case.empty()) r["mate_case"] = row.mate_case;
      if (row.mate_k1_err) r["mate_k1_err"] = *row.mate_k1_err;
      if (row.mate_k2_err) r["mate_k2_err"] = *row.mate_k2_err;
      if (row.mate_plane) r["mate_plane"] = *row.mate_plane;
      if (!row.notes.empty()) r["notes"] = row.notes;
      doc.push_back(std::move(r));
    }
    out << doc.dump(2) << '\n';
  }

  if (int code = write_text(cfg.output, out.str()); code != 0) return code;
  return all_ok ? 0 : kExitValidation;
}

// --- corpus ---------------------------------------------------------------------

int cmd_corpus(const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error (io-error): cannot create directory '" << out_dir
              << "': " << ec.message() << "\n";
    return kExitParseIo;
  }
  int count = nbc_corpus_default_count();
  for (int i = 0; i < count; ++i) {
    double a = 0.0, b = 0.0;
    nbc_status status = nbc_corpus_default_params(i, &a, &b);
    if (status != NBC_OK) return fail(status, "listing corpus parameters");
    CurveHandle curve;
    status = nbc_corpus_example(a, b, curve.out());
    if (status != NBC_OK) return fail(status, "building corpus curve");
    char* json_text = nullptr;
    status = nbc_curve_to_json(curve.get(), &json_text);
    if (status != NBC_OK) return fail(status, "serializing corpus curve");
    std::string text(json_text);
    nbc_string_free(json_text);
    std::filesystem::path path =
        std::filesystem::path(out_dir) /
        (std::string(nbc_curve_name(curve.get())) + ".json");
    if (int code = write_text(path.string(), text); code != 0) return code;
    std::cout << "wrote " << path.generic_string() << "\n";
  }
  return 0;
}

// --- selftest ---------------------------------------------------------------------

int cmd_selftest() {
  int checks = 0;
  auto expect = [&checks](bool ok, const std::string& what) {
    if (ok) {
      std::cout << "ok - " << what << "\n";
      ++checks;
      return true;
    }
    std::cout << "FAIL - " << what << "\n";
    return false;
  };
  auto near = [](double x, double y, double tol) { return std::abs(x - y) <= tol; };

  CurveHandle helix;
  if (nbc_corpus_example(1.0, 2.0, helix.out()) != NBC_OK)
    return expect(false, "corpus curve construction"), kExitValidation;

  // Frame vs closed form at several parameters.
  bool frames_ok = true;
  for (double s : {-1.5, -0.4, 0.0, 0.7, 1.9}) {
    nbc_frame measured{}, exact{};
    if (nbc_frame_at(helix.get(), nullptr, s, &measured) != NBC_OK ||
        nbc_corpus_closed_form_frame(1.0, 2.0, s, &exact) != NBC_OK) {
      frames_ok = false;
      break;
    }
    for (int i = 0; i < 4; ++i)
      frames_ok = frames_ok && near(measured.L[i], exact.L[i], 1e-9) &&
                  near(measured.N[i], exact.N[i], 1e-9) &&
                  near(measured.W1[i], exact.W1[i], 1e-9) &&
                  near(measured.W2[i], exact.W2[i], 1e-9);
    frames_ok = frames_ok && near(measured.k1, 1.5, 1e-9) &&
                near(measured.k2, -2.0, 1e-9) &&
                measured.gram_residual < 1e-8 && measured.frenet_residual < 1e-8;
  }
  if (!expect(frames_ok, "frames match the closed form (a=1, b=2)"))
    return kExitValidation;

  std::vector<double> grid = make_grid(-2.0, 2.0, 21);
  nbc_obstruction obstruction{};
  bool obs_ok = nbc_classical_obstruction(helix.get(), nullptr, grid.data(),
                                          static_cast<int>(grid.size()),
                                          &obstruction) == NBC_OK &&
                near(obstruction.alpha_forced, 2.0 / 3.0, 1e-9) &&
                near(obstruction.obstruction, 4.0 / 3.0, 1e-9);
  if (!expect(obs_ok, "classical-mate obstruction = 4/3")) return kExitValidation;

  nbc_fit fit{};
  bool fit_ok = nbc_fit_constants(helix.get(), nullptr, grid.data(),
                                  static_cast<int>(grid.size()), &fit) == NBC_OK &&
                near(fit.alpha, 0.24, 1e-9) && near(fit.beta, -0.32, 1e-9) &&
                fit.underdetermined == 1;
  if (!expect(fit_ok, "constant fit finds the minimum-norm pair (0.24, -0.32)"))
    return kExitValidation;

  nbc_mate_report report{};
  bool mate1_ok = nbc_construct_mate(helix.get(), nullptr, 0.0, 0.5, grid.data(),
                                     static_cast<int>(grid.size()), nullptr,
                                     &report, nullptr) == NBC_OK &&
                  report.which == 1 && near(report.ell0, std::sqrt(2.0), 1e-8) &&
                  near(report.measured_k1_bar, 0.75, 1e-6) &&
                  near(std::abs(report.measured_k2_bar), 1.0, 1e-6);
  if (!expect(mate1_ok, "case-I mate has ell0 = sqrt(2), k1 = 0.75, |k2| = 1"))
    return kExitValidation;

  bool mate2_ok =
      nbc_construct_mate(helix.get(), nullptr, 1.0 / 3.0, -0.25, grid.data(),
                         static_cast<int>(grid.size()), nullptr, &report,
                         nullptr) == NBC_OK &&
      report.which == 2 && near(report.ell0 * report.ell0, 5.0 / 6.0, 1e-8) &&
      near(report.measured_k1_bar, 1.8, 1e-6) &&
      near(std::abs(report.measured_k2_bar), 2.4, 1e-6) &&
      report.plane_coincidence_residual < 1e-6;
  if (!expect(mate2_ok, "case-II mate has ell0^2 = 5/6, k1 = 1.8, |k2| = 2.4"))
    return kExitValidation;

  CurveHandle scaled;
  double length = 0.0;
  bool scale_ok =
      nbc_corpus_scaled_example(1.0, 2.0, 2.0, scaled.out()) == NBC_OK &&
      nbc_pseudo_arc_length(scaled.get(), -1.0, 1.0, 0.0, &length) == NBC_OK &&
      near(length, 4.0, 1e-9);
  if (!expect(scale_ok, "scaled curve has pseudo-arc length 2*(t1-t0)"))
    return kExitValidation;

  CurveHandle expected;
  double slope = 0.0;
  bool positions_ok = nbc_corpus_expected_mate(1.0, 2.0, 2, expected.out(),
                                               &slope, nullptr, nullptr) == NBC_OK;
  if (positions_ok) {
    CurveHandle mate;
    positions_ok =
        nbc_construct_mate(helix.get(), nullptr, 1.0 / 3.0, -0.25, grid.data(),
                           static_cast<int>(grid.size()), mate.out(), &report,
                           nullptr) == NBC_OK;
    if (positions_ok) {
      for (double s : make_grid(-1.8, 1.8, 9)) {
        double ours[4] = {0, 0, 0, 0}, theirs[4] = {0, 0, 0, 0};
        double s_bar = slope * s;
        positions_ok = positions_ok &&
                       nbc_curve_eval(mate.get(), nullptr, s_bar, 0, ours) ==
                           NBC_OK &&
                       nbc_curve_eval(expected.get(), nullptr, s_bar, 0,
                                      theirs) == NBC_OK;
        for (int i = 0; i < 4 && positions_ok; ++i)
          positions_ok = near(ours[i], theirs[i], 1e-7);
        if (!positions_ok) break;
      }
    }
  }
  if (!expect(positions_ok, "constructed case-II mate matches its closed form"))
    return kExitValidation;

  std::cout << "selftest: " << checks << " checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Null-curve geometry toolkit: Cartan frames, curvatures, mate "
      "classification and construction in Minkowski 4-space"};
  app.require_subcommand(1);

  std::string spec_path, verify_dir, corpus_dir = ".";
  int jobs = 1;

  auto* frame_cmd = app.add_subcommand(
      "frame", "Curvature/frame table of a curve spec over a sample grid");
  CommonConfig frame_cfg;
  frame_cmd->add_option("spec", spec_path, "Curve spec file")->required();
  add_common_flags(frame_cmd, frame_cfg, "csv");

  auto* classify_cmd = app.add_subcommand(
      "classify",
      "Mate-condition classification and the classical-mate obstruction");
  ClassifyConfig classify_cfg;
  classify_cmd->add_option("spec", spec_path, "Curve spec file")->required();
  add_common_flags(classify_cmd, classify_cfg.common, "structured-text");
  auto* cls_alpha = classify_cmd->add_option("--alpha", classify_cfg.alpha,
                                             "Offset constant along W1");
  auto* cls_beta = classify_cmd->add_option("--beta", classify_cfg.beta,
                                            "Offset constant along W2");
  auto* cls_fit = classify_cmd->add_flag("--fit", classify_cfg.fit,
                                         "Fit (alpha, beta) by least squares");
  cls_alpha->needs(cls_beta);
  cls_beta->needs(cls_alpha);
  cls_fit->excludes(cls_alpha);

  auto* mate_cmd = app.add_subcommand(
      "mate", "Construct the offset mate and verify the predicted relations");
  MateConfig mate_cfg;
  mate_cmd->add_option("spec", spec_path, "Curve spec file")->required();
  add_common_flags(mate_cmd, mate_cfg.common, "structured-text");
  auto* mate_alpha = mate_cmd->add_option("--alpha", mate_cfg.alpha,
                                          "Offset constant along W1");
  auto* mate_beta = mate_cmd->add_option("--beta", mate_cfg.beta,
                                         "Offset constant along W2");
  auto* mate_fit = mate_cmd->add_flag("--fit", mate_cfg.fit,
                                      "Fit (alpha, beta) by least squares");
  mate_alpha->needs(mate_beta);
  mate_beta->needs(mate_alpha);
  mate_fit->excludes(mate_alpha);
  mate_cmd->add_option("--plot", mate_cfg.plot,
                       "Also write mate positions (s_bar, x0..x3) as CSV");

  auto* verify_cmd = app.add_subcommand(
      "verify", "Batch residual suite over a directory of curve specs");
  CommonConfig verify_cfg;
  verify_cmd->add_option("dir", verify_dir, "Directory of .json curve specs")
      ->required();
  add_common_flags(verify_cmd, verify_cfg, "csv");
  verify_cmd->add_option("--jobs", jobs, "Worker threads (output is ordered)")
      ->default_val(1)
      ->check(CLI::Range(1, 256));

  auto* corpus_cmd = app.add_subcommand(
      "corpus", "Write the built-in example curves as spec files");
  corpus_cmd->add_option("--output", corpus_dir, "Target directory")
      ->default_val(".");

  auto* selftest_cmd = app.add_subcommand(
      "selftest", "Run the built-in end-to-end sanity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitParseIo;
  }

  if (frame_cmd->parsed()) return cmd_frame(spec_path, frame_cfg);
  if (classify_cmd->parsed()) return cmd_classify(spec_path, classify_cfg);
  if (mate_cmd->parsed()) {
    if (!mate_cfg.fit && !mate_cfg.alpha.has_value()) {
      std::cerr << "error: mate needs either --alpha and --beta or --fit\n";
      return kExitParseIo;
    }
    return cmd_mate(spec_path, mate_cfg);
  }
  if (verify_cmd->parsed()) return cmd_verify(verify_dir, verify_cfg, jobs);
  if (corpus_cmd->parsed()) return cmd_corpus(corpus_dir);
  if (selftest_cmd->parsed()) return cmd_selftest();
  return kExitParseIo;
}
