// Command-line front end: closed-form QFI reports, three-way numerical
// verification against the truncated-Fock paths, and argument scans with
// CSV/JSON emission.
//
// Exit codes are a stable contract:
//   0 ok, 2 bad config, 3 no information for the requested model,
//   4 verification failure, 5 truncation too small, 6 output I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "mzqfi/mzqfi.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoInformation = 3;
constexpr int kExitVerifyFailed = 4;
constexpr int kExitTruncation = 5;
constexpr int kExitIo = 6;

using Complex = std::complex<double>;
using json = nlohmann::json;

// All numbers are emitted with 17 significant digits so that every 64-bit
// float round-trips exactly and repeated runs are byte-identical.
std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct RunConfig {
  double alpha1_re = 0, alpha1_im = 0;
  double alpha2_re = 0, alpha2_im = 0;
  double r = 0;
  std::optional<char> model;
  std::optional<long> trunc;
  long nu = 1;
  std::optional<std::string> format;
  std::optional<std::string> out;
  int grid_steps = 64;

  Complex alpha1() const { return {alpha1_re, alpha1_im}; }
  Complex alpha2() const { return {alpha2_re, alpha2_im}; }
};

char parse_model(const std::string& s) {
  if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'd') return s[0];
  throw std::invalid_argument("model must be one of a|b|c|d, got '" + s + "'");
}

mzqfi::ModelKind model_from_char(char c) {
  switch (c) {
    case 'a': return mzqfi::ModelKind::a_nuisance;
    case 'b': return mzqfi::ModelKind::b_antisymmetric;
    case 'c': return mzqfi::ModelKind::c_upper_arm;
    default: return mzqfi::ModelKind::d_lower_arm;
  }
}

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  json doc = json::parse(in);
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

  const auto pair_of_reals = [](const json& v, const char* key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw std::invalid_argument(std::string("config key '") + key +
                                  "' must be a [re, im] pair of reals");
    return std::pair<double, double>{v[0].get<double>(), v[1].get<double>()};
  };

  for (const auto& [key, value] : doc.items()) {
    if (key == "alpha1") {
      std::tie(cfg.alpha1_re, cfg.alpha1_im) = pair_of_reals(value, "alpha1");
    } else if (key == "alpha2") {
      std::tie(cfg.alpha2_re, cfg.alpha2_im) = pair_of_reals(value, "alpha2");
    } else if (key == "r") {
      cfg.r = value.get<double>();
    } else if (key == "model") {
      cfg.model = parse_model(value.get<std::string>());
    } else if (key == "trunc") {
      cfg.trunc = value.get<long>();
    } else if (key == "nu") {
      cfg.nu = value.get<long>();
    } else if (key == "format") {
      cfg.format = value.get<std::string>();
    } else if (key == "out") {
      cfg.out = value.get<std::string>();
    } else if (key == "grid_steps") {
      cfg.grid_steps = value.get<int>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.r >= 0.0))
    throw std::invalid_argument("config key 'r' must satisfy r >= 0");
  if (cfg.nu < 1)
    throw std::invalid_argument("config key 'nu' must be a positive integer");
  if (cfg.trunc && *cfg.trunc < 2)
    throw std::invalid_argument("config key 'trunc' must be at least 2");
  if (cfg.format && *cfg.format != "csv" && *cfg.format != "json")
    throw std::invalid_argument("config key 'format' must be csv or json");
  if (cfg.grid_steps < 8)
    throw std::invalid_argument("config key 'grid_steps' must be at least 8");
}

std::string config_echo_json(const RunConfig& cfg, bool with_grid) {
  std::ostringstream os;
  os << "{\"alpha1\":[" << fmt17(cfg.alpha1_re) << "," << fmt17(cfg.alpha1_im)
     << "],\"alpha2\":[" << fmt17(cfg.alpha2_re) << "," << fmt17(cfg.alpha2_im)
     << "],\"r\":" << fmt17(cfg.r) << ",\"model\":";
  if (cfg.model)
    os << "\"" << *cfg.model << "\"";
  else
    os << "null";
  os << ",\"nu\":" << cfg.nu;
  if (with_grid) os << ",\"grid_steps\":" << cfg.grid_steps;
  os << "}";
  return os.str();
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out) {
    std::ofstream f(*cfg.out, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open output path '" + *cfg.out + "'");
    f << text;
    if (!f) throw std::ios_base::failure("failed writing to '" + *cfg.out + "'");
  } else {
    std::cout << text;
  }
}

int cmd_qfi(const RunConfig& cfg) {
  using namespace mzqfi;
  const QfiMatrix<double> f = qfi_closed_form(cfg.alpha1(), cfg.r, cfg.alpha2());

  double values[4];
  bool degenerate = false;
  for (ModelKind m : kAllModels)
    values[model_index(m)] =
        model_qfi(f, m, m == ModelKind::a_nuisance ? &degenerate : nullptr);
  if (degenerate)
    std::cerr << "warning: no common-phase information (F11 = 0); "
                 "model a reported as F22\n";

  std::optional<double> bounds[4];
  for (ModelKind m : kAllModels) {
    const double v = values[model_index(m)];
    if (v > 0.0) bounds[model_index(m)] = crb(v, cfg.nu).variance_lower_bound;
  }

  const std::string format = cfg.format.value_or("json");
  std::ostringstream os;
  if (format == "json") {
    os << "{\"config\":" << config_echo_json(cfg, false) << ",\"qfi\":{\"f11\":"
       << fmt17(f.f11) << ",\"f12\":" << fmt17(f.f12) << ",\"f22\":" << fmt17(f.f22)
       << "},\"models\":{";
    for (ModelKind m : kAllModels)
      os << (model_index(m) ? "," : "") << "\"" << model_label(m)
         << "\":" << fmt17(values[model_index(m)]);
    os << "},\"bounds\":{";
    for (ModelKind m : kAllModels) {
      os << (model_index(m) ? "," : "") << "\"" << model_label(m) << "\":";
      if (bounds[model_index(m)])
        os << fmt17(*bounds[model_index(m)]);
      else
        os << "null";
    }
    os << "}}\n";
  } else {
    os << "f11,f12,f22,fa,fb,fc,fd,bound_a,bound_b,bound_c,bound_d\n"
       << fmt17(f.f11) << "," << fmt17(f.f12) << "," << fmt17(f.f22);
    for (ModelKind m : kAllModels) os << "," << fmt17(values[model_index(m)]);
    for (ModelKind m : kAllModels) {
      os << ",";
      if (bounds[model_index(m)]) os << fmt17(*bounds[model_index(m)]);
    }
    os << "\n";
  }
  write_output(cfg, os.str());

  if (cfg.model) {
    const int idx = model_index(model_from_char(*cfg.model));
    if (!bounds[idx]) {
      std::cerr << "error: model " << *cfg.model
                << " carries no information (QFI <= 0); no Cramér-Rao bound\n";
      return kExitNoInformation;
    }
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  using namespace mzqfi;
  if (std::abs(cfg.alpha1()) > 1.5 || std::abs(cfg.alpha2()) > 1.5 || cfg.r > 0.8)
    throw std::invalid_argument(
        "verify expects |alpha1|, |alpha2| <= 1.5 and r <= 0.8");

  Truncation<double> trunc =
      cfg.trunc ? Truncation<double>(*cfg.trunc, *cfg.trunc)
                : auto_truncation(cfg.alpha1(), cfg.r, cfg.alpha2());
  const FockVector<double> psi0 =
      prepare_input(InputSpec<double>(cfg.alpha1(), cfg.r, cfg.alpha2(), trunc));
  const MziPipeline<double> pipeline(psi0);

  const double step = 1e-4;
  const QfiMatrix<double> closed = qfi_closed_form(cfg.alpha1(), cfg.r, cfg.alpha2());
  const QfiMatrix<double> generator = qfi_generator_path(pipeline);
  const QfiMatrix<double> fd =
      qfi_finite_difference_path(psi0, pipeline, PhasePair<double>{0.0, 0.0}, step);

  const auto print_matrix = [](const char* name, const QfiMatrix<double>& f) {
    std::cout << name << ": f11=" << fmt17(f.f11) << " f12=" << fmt17(f.f12)
              << " f22=" << fmt17(f.f22) << "\n";
  };
  std::cout << "truncation: d1=" << trunc.d1 << " d2=" << trunc.d2 << "\n";
  print_matrix("closed-form   ", closed);
  print_matrix("generator     ", generator);
  print_matrix("finite-diff   ", fd);

  double disc = 0.0;
  const auto pairwise = [&](const QfiMatrix<double>& a, const QfiMatrix<double>& b) {
    disc = std::max(disc, std::abs(a.f11 - b.f11));
    disc = std::max(disc, std::abs(a.f12 - b.f12));
    disc = std::max(disc, std::abs(a.f22 - b.f22));
  };
  pairwise(closed, generator);
  pairwise(closed, fd);
  pairwise(generator, fd);

  const double tol = std::max(1e-5, 10.0 * step * step);
  std::cout << "max discrepancy: " << fmt17(disc) << "\n";
  std::cout << "tolerance      : " << fmt17(tol) << "\n";
  const bool pass = disc <= tol;
  std::cout << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitVerifyFailed;
}

int cmd_scan(const RunConfig& cfg) {
  using namespace mzqfi;
  if (!cfg.out)
    throw std::invalid_argument("scan requires --out (or config key 'out')");

  const double n1 = std::norm(cfg.alpha1());
  const double n2 = std::norm(cfg.alpha2());
  const ModelKind objective = model_from_char(cfg.model.value_or('a'));
  const ScanGrid<double> grid(n1, n2, cfg.r, cfg.grid_steps, cfg.grid_steps,
                              objective);
  const ScanResult<double> result = run_scan(grid);

  const std::string format = cfg.format.value_or("csv");
  std::ostringstream os;
  if (format == "csv") {
    os << "theta1,theta2,F11,F12,F22,Fa,Fb,Fc,Fd\n";
    for (const auto& row : result.rows)
      os << fmt17(row.theta1) << "," << fmt17(row.theta2) << "," << fmt17(row.f11)
         << "," << fmt17(row.f12) << "," << fmt17(row.f22) << "," << fmt17(row.fa)
         << "," << fmt17(row.fb) << "," << fmt17(row.fc) << "," << fmt17(row.fd)
         << "\n";
  } else {
    os << "{\"config\":" << config_echo_json(cfg, true) << ",\"grid\":{\"n1\":"
       << fmt17(n1) << ",\"n2\":" << fmt17(n2) << ",\"r\":" << fmt17(cfg.r)
       << ",\"theta1_steps\":" << cfg.grid_steps
       << ",\"theta2_steps\":" << cfg.grid_steps << "},\"rows\":[";
    bool first = true;
    for (const auto& row : result.rows) {
      os << (first ? "" : ",") << "[" << fmt17(row.theta1) << "," << fmt17(row.theta2)
         << "," << fmt17(row.f11) << "," << fmt17(row.f12) << "," << fmt17(row.f22)
         << "," << fmt17(row.fa) << "," << fmt17(row.fb) << "," << fmt17(row.fc)
         << "," << fmt17(row.fd) << "]";
      first = false;
    }
    os << "],\"argmax\":{";
    for (ModelKind m : kAllModels) {
      const auto& best = result.argmax_for(m);
      os << (model_index(m) ? "," : "") << "\"" << model_label(m)
         << "\":{\"theta1\":" << fmt17(best.theta1)
         << ",\"theta2\":" << fmt17(best.theta2)
         << ",\"value\":" << fmt17(best.value) << "}";
    }
    os << "}}\n";
  }
  write_output(cfg, os.str());

  for (ModelKind m : kAllModels) {
    const auto& best = result.argmax_for(m);
    ScanGrid<double> refine_grid = grid;
    refine_grid.model = m;
    const RefineResult<double> refined =
        refine_max(refine_grid, best.theta1, best.theta2);
    std::cout << "model " << model_label(m) << ": grid argmax theta1="
              << fmt17(best.theta1) << " theta2=" << fmt17(best.theta2)
              << " value=" << fmt17(best.value)
              << " refined value=" << fmt17(refined.value)
              << (refined.converged ? "" : " (refinement not converged)") << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Fisher information bounds for two-mode Mach-Zehnder "
               "phase estimation"};
  app.require_subcommand(1);

  std::string config_path, model_str, format_str, out_str;
  double a1re = 0, a1im = 0, a2re = 0, a2im = 0, r = 0;
  long trunc = 0, nu = 1;
  int grid_steps = 64;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags override");
    sub->add_option("--alpha1-re", a1re, "Re alpha1 (mode-1 displacement)");
    sub->add_option("--alpha1-im", a1im, "Im alpha1");
    sub->add_option("--alpha2-re", a2re, "Re alpha2 (mode-2 coherent amplitude)");
    sub->add_option("--alpha2-im", a2im, "Im alpha2");
    sub->add_option("--r", r, "squeeze parameter, r >= 0");
    sub->add_option("--model", model_str, "estimation model a|b|c|d");
    sub->add_option("--trunc", trunc, "Fock levels per mode (overrides auto-sizing)");
    sub->add_option("--nu", nu, "number of experiment repetitions");
    sub->add_option("--grid-steps", grid_steps, "scan resolution per angle");
    sub->add_option("--out", out_str, "output path (scan data / reports)");
    sub->add_option("--format", format_str, "output format csv|json");
  };

  CLI::App* sub_qfi = app.add_subcommand(
      "qfi", "closed-form QFI matrix, model QFIs and Cramér-Rao bounds");
  CLI::App* sub_verify = app.add_subcommand(
      "verify", "cross-check closed form against the truncated-Fock paths");
  CLI::App* sub_scan = app.add_subcommand(
      "scan", "tabulate QFIs over the arguments of alpha1 and alpha2");
  add_common(sub_qfi);
  add_common(sub_verify);
  add_common(sub_scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    RunConfig cfg;
    if (sub->count("--config")) load_config_file(config_path, cfg);
    if (sub->count("--alpha1-re")) cfg.alpha1_re = a1re;
    if (sub->count("--alpha1-im")) cfg.alpha1_im = a1im;
    if (sub->count("--alpha2-re")) cfg.alpha2_re = a2re;
    if (sub->count("--alpha2-im")) cfg.alpha2_im = a2im;
    if (sub->count("--r")) cfg.r = r;
    if (sub->count("--model")) cfg.model = parse_model(model_str);
    if (sub->count("--trunc")) cfg.trunc = trunc;
    if (sub->count("--nu")) cfg.nu = nu;
    if (sub->count("--grid-steps")) cfg.grid_steps = grid_steps;
    if (sub->count("--out")) cfg.out = out_str;
    if (sub->count("--format")) cfg.format = format_str;
    validate_config(cfg);

    if (sub == sub_qfi) return cmd_qfi(cfg);
    if (sub == sub_verify) return cmd_verify(cfg);
    return cmd_scan(cfg);
  } catch (const mzqfi::TruncationTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTruncation;
  } catch (const mzqfi::NoInformation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoInformation;
  } catch (const mzqfi::NumericalQuality& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
