#include "ktangle/cli.hpp"

#include "ktangle/bipartite.hpp"
#include "ktangle/classify.hpp"
#include "ktangle/fourqubit.hpp"
#include "ktangle/ktangle.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ktangle::cli {

namespace {

std::string fmt(double x, const char* spec = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, x);
  return buf;
}

std::string fmt17(double x) {
  return fmt(x == 0.0 ? 0.0 : x, "%.17g");  // avoid "-0"
}

std::string fmt(std::complex<double> z) {
  std::string s = fmt(z.real());
  s += (z.imag() < 0 ? "-" : "+");
  s += fmt(std::abs(z.imag()));
  s += "j";
  return s;
}

}  // namespace

const char* channel_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::AmplitudeDamping: return "ad";
    case ChannelKind::Dephasing: return "dephasing";
    case ChannelKind::PhaseFlip: return "phase-flip";
    case ChannelKind::Custom: return "custom";
    case ChannelKind::FromUnitary: return "unitary";
  }
  return "?";
}

ChannelKind channel_from_name(const std::string& name) {
  if (name == "ad" || name == "amplitude-damping") {
    return ChannelKind::AmplitudeDamping;
  }
  if (name == "dephasing" || name == "d") return ChannelKind::Dephasing;
  if (name == "phase-flip" || name == "pf") return ChannelKind::PhaseFlip;
  if (name == "custom") return ChannelKind::Custom;
  if (name == "unitary") return ChannelKind::FromUnitary;
  throw std::invalid_argument(
      "unknown channel '" + name +
      "' (expected ad, dephasing, phase-flip, custom or unitary)");
}

KrausPair<double> make_channel(const ChannelSpec& spec, double p) {
  switch (spec.kind) {
    case ChannelKind::AmplitudeDamping: return ad_channel(p);
    case ChannelKind::Dephasing: return dephasing_channel(p);
    case ChannelKind::PhaseFlip: return phase_flip_channel(p);
    case ChannelKind::Custom: return {spec.k0, spec.k1};
    case ChannelKind::FromUnitary: return kraus_from_unitary(spec.unitary);
  }
  throw std::logic_error("unreachable channel kind");
}

double Grid::at(int i) const {
  if (count <= 1) return start;
  return start + (stop - start) * double(i) / double(count - 1);
}

Grid fixed_grid(double value) { return {value, value, 1}; }

std::complex<double> parse_complex(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw std::invalid_argument("empty complex literal");

  const auto parse_real = [](std::string_view part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    if (part.front() == '+') part.remove_prefix(1);  // from_chars rejects '+'
    double value = 0.0;
    const char* begin = part.data();
    const char* end = part.data() + part.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      throw std::invalid_argument("bad numeric literal '" + std::string(part) +
                                  "'");
    }
    return value;
  };

  const bool has_j = (s.back() == 'j' || s.back() == 'J');
  if (has_j) s.pop_back();

  // Split re and im at the last sign that does not follow an exponent mark.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
    }
  }

  if (!has_j) {
    if (split != std::string::npos) {
      throw std::invalid_argument("complex literal '" + std::string(text) +
                                  "' needs a trailing j on the imaginary part");
    }
    return {parse_real(s), 0.0};
  }
  if (split == std::string::npos) {
    return {0.0, parse_real(s)};
  }
  return {parse_real(std::string_view(s).substr(0, split)),
          parse_real(std::string_view(s).substr(split))};
}

Grid parse_grid(const std::string& text) {
  const auto colons = std::count(text.begin(), text.end(), ':');
  if (colons == 0) {
    return fixed_grid(parse_complex(text).real());
  }
  if (colons != 2) {
    throw std::invalid_argument("grid '" + text +
                                "' must be a value or start:stop:count");
  }
  const auto first = text.find(':');
  const auto second = text.find(':', first + 1);
  Grid g;
  g.start = parse_complex(text.substr(0, first)).real();
  g.stop = parse_complex(text.substr(first + 1, second - first - 1)).real();
  g.count = std::stoi(text.substr(second + 1));
  if (g.count < 1) throw std::invalid_argument("grid count must be >= 1");
  return g;
}

namespace {

std::vector<std::complex<double>> parse_complex_list(const std::string& text,
                                                     std::size_t expected) {
  std::vector<std::complex<double>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  if (out.size() != expected) {
    std::ostringstream msg;
    msg << "expected " << expected << " comma-separated complex entries, got "
        << out.size();
    throw std::invalid_argument(msg.str());
  }
  return out;
}

}  // namespace

Mat2cd parse_mat2(const std::string& text) {
  const auto entries = parse_complex_list(text, 4);
  Mat2cd m;
  m << entries[0], entries[1], entries[2], entries[3];
  return m;
}

Mat4cd parse_mat4(const std::string& text) {
  const auto entries = parse_complex_list(text, 16);
  Mat4cd m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m(i, j) = entries[4 * i + j];
  }
  return m;
}

SweepConfig figure_preset(int figure, int grid_points) {
  if (figure < 1 || figure > 9) {
    throw std::invalid_argument("figure preset must be 1..9");
  }
  if (grid_points < 1) throw std::invalid_argument("grid must be >= 1");
  SweepConfig cfg;
  cfg.p = {0.0, 1.0, grid_points};
  switch ((figure - 1) / 3) {
    case 0: cfg.channel.kind = ChannelKind::AmplitudeDamping; break;
    case 1: cfg.channel.kind = ChannelKind::Dephasing; break;
    case 2: cfg.channel.kind = ChannelKind::PhaseFlip; break;
  }
  if (figure % 3 == 0) {
    // tangles against (p, e0sq) at rho_ee = 1/2
    cfg.rho_ee = fixed_grid(0.5);
    cfg.e0sq = {0.0, 1.0, grid_points};
  } else {
    // tangles against (p, rho_ee) at e0sq = 0.4
    const auto [lo, hi] = rho_ee_bounds(0.4);
    cfg.rho_ee = {lo, hi, grid_points};
    cfg.e0sq = fixed_grid(0.4);
  }
  return cfg;
}

std::string csv_header() {
  return "p,rho_ee,phi,e0sq,tau,c2_sp_se,c2_s_spe,c2_e_ssp,c2_sps,c2_spe,"
         "c2_se,G,dS,dE,family,tier";
}

SweepStats run_sweep(const SweepConfig& cfg, std::ostream& csv) {
  if (cfg.p.count < 1 || cfg.rho_ee.count < 1 || cfg.e0sq.count < 1) {
    throw std::invalid_argument("sweep grids must have at least one point");
  }
  SweepStats stats;
  csv << csv_header() << '\n';
  for (int ip = 0; ip < cfg.p.count; ++ip) {
    const double p = cfg.p.at(ip);
    const KrausPair<double> kp = make_channel(cfg.channel, p);
    for (int ir = 0; ir < cfg.rho_ee.count; ++ir) {
      const double rho = cfg.rho_ee.at(ir);
      for (int ie = 0; ie < cfg.e0sq.count; ++ie) {
        const double e0 = cfg.e0sq.at(ie);
        if (e0 > 4.0 * rho * (1.0 - rho) + kNormTol<double>) {
          ++stats.skipped;
          continue;
        }
        const auto r0 =
            InitialReduced<double>::from_entanglement(rho, cfg.phi, e0);
        const auto rep = full_report(kp, r0, cfg.tol);
        csv << fmt17(p) << ',' << fmt17(rho) << ',' << fmt17(cfg.phi) << ','
            << fmt17(e0) << ',' << fmt17(rep.tau) << ',' << fmt17(rep.c2_sp_se)
            << ',' << fmt17(rep.c2_s_spe) << ',' << fmt17(rep.c2_e_ssp) << ','
            << fmt17(rep.c2_sps) << ',' << fmt17(rep.c2_spe) << ','
            << fmt17(rep.c2_se) << ',' << fmt17(rep.g) << ',' << fmt17(rep.d_s)
            << ',' << fmt17(rep.d_e) << ',' << to_cstring(rep.family) << ','
            << to_cstring(rep.tier) << '\n';
        ++stats.rows;
      }
    }
  }
  return stats;
}

int cmd_sweep(const SweepConfig& cfg, std::ostream& log) {
  SweepStats stats;
  if (cfg.out.empty() || cfg.out == "-") {
    stats = run_sweep(cfg, std::cout);
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      log << "error: cannot open output path '" << cfg.out << "'\n";
      return 2;
    }
    stats = run_sweep(cfg, file);
    if (!file) {
      log << "error: writing to '" << cfg.out << "' failed\n";
      return 2;
    }
  }
  log << "wrote " << stats.rows << " rows";
  if (stats.skipped > 0) {
    log << " (skipped " << stats.skipped
        << " infeasible e0sq/rho_ee combinations)";
  }
  log << '\n';
  return 0;
}

int cmd_classify(const ClassifyConfig& cfg, std::ostream& out) {
  const KrausPair<double> kp = make_channel(cfg.channel, cfg.p);
  const auto r0 =
      InitialReduced<double>::from_entanglement(cfg.rho_ee, cfg.phi, cfg.e0sq);
  const auto rep = full_report(kp, r0, cfg.tol);
  const auto cls = classify(kp, r0, cfg.tol);

  out << "channel: " << channel_name(cfg.channel.kind);
  if (cfg.channel.kind != ChannelKind::Custom &&
      cfg.channel.kind != ChannelKind::FromUnitary) {
    out << " (p = " << fmt(cfg.p) << ")";
  }
  out << '\n';
  out << "initial state: rho_ee = " << fmt(r0.rho_ee) << ", phi = "
      << fmt(r0.phi) << ", |rho_ge| = " << fmt(r0.rho_ge_abs)
      << ", e0sq = " << fmt(r0.e0sq()) << '\n';
  out << "family: " << to_cstring(rep.family) << "  [" << to_cstring(rep.tier)
      << "]\n\n";
  out << "tau      = " << fmt(rep.tau) << '\n';
  out << "c2_sp_se = " << fmt(rep.c2_sp_se) << '\n';
  out << "c2_s_spe = " << fmt(rep.c2_s_spe) << '\n';
  out << "c2_e_ssp = " << fmt(rep.c2_e_ssp) << '\n';
  out << "c2_sps   = " << fmt(rep.c2_sps) << '\n';
  out << "c2_spe   = " << fmt(rep.c2_spe) << '\n';
  out << "c2_se    = " << fmt(rep.c2_se) << '\n';
  out << "D_S = " << fmt(rep.d_s) << ", D_E = " << fmt(rep.d_e)
      << ", G = " << fmt(rep.g) << '\n';
  out << "condition values:\n";
  out << "  u = " << fmt(cls.u) << '\n';
  out << "  v = " << fmt(cls.v) << '\n';
  out << "  |u - v| = " << fmt(cls.u_minus_v_abs) << '\n';
  out << "  |det K0| + |det K1| = " << fmt(cls.sum_abs_det) << '\n';
  out << "  biseparability residual (S) = " << fmt(cls.bisep_s_residual)
      << '\n';
  out << "  biseparability residual (E) = " << fmt(cls.bisep_e_residual)
      << '\n';
  const double ckw_sp = rep.c2_sp_se - rep.c2_sps - rep.c2_spe - rep.tau;
  const double ckw_s = rep.c2_s_spe - rep.c2_sps - rep.c2_se - rep.tau;
  const double ckw_e = rep.c2_e_ssp - rep.c2_spe - rep.c2_se - rep.tau;
  out << "monogamy residuals: S' = " << fmt(ckw_sp) << ", S = " << fmt(ckw_s)
      << ", E = " << fmt(ckw_e) << '\n';
  return 0;
}

namespace {

struct Identity {
  const char* name;
  double threshold;
  double worst = 0.0;

  void update(double residual) { worst = std::max(worst, residual); }
};

}  // namespace

int cmd_verify(const VerifyConfig& cfg, std::ostream& out) {
  if (cfg.n < 1) throw std::invalid_argument("verify needs n >= 1");

  enum {
    kTauSimplified,
    kTauKraus,
    kSpSe,
    kSSpe,
    kESsp,
    kSps,
    kSpe,
    kSe,
    kCkwSp,
    kCkwS,
    kCkwE,
    kDsDe,
    kBoundSps,
    kBoundSpe,
    kBoundSe,
    kFourSRest,
    kFourERest,
    kFourSePair,
    kFourSBlock,
    kFourEBlock,
    kFourSpRest,
    kFourEpRest,
    kFourSpEpPair,
    kFourSpBlock,
    kFourEpBlock,
    kFourTau,
    kFourTauPrimed,
    kIdentityCount
  };
  std::array<Identity, kIdentityCount> ids = {{
      {"tau.simplified_vs_direct", 1e-9},
      {"tau.kraus_vs_direct", 1e-9},
      {"c2_sp_se.closed_vs_oracle", 1e-9},
      {"c2_s_spe.closed_vs_oracle", 1e-9},
      {"c2_e_ssp.closed_vs_oracle", 1e-9},
      {"c2_sps.closed_vs_oracle", 1e-9},
      {"c2_spe.closed_vs_oracle", 1e-9},
      {"c2_se.closed_vs_oracle", 1e-9},
      {"ckw.sp.oracle", 1e-8},
      {"ckw.s.oracle", 1e-8},
      {"ckw.e.oracle", 1e-8},
      {"ds_de.relation", 1e-10},
      {"bounds.sps.violation", 1e-10},
      {"bounds.spe.violation", 1e-10},
      {"bounds.se.violation", 1e-10},
      {"fourqubit.s_vs_rest", 1e-9},
      {"fourqubit.e_vs_rest", 1e-9},
      {"fourqubit.se_pairwise", 1e-9},
      {"fourqubit.s_block_pairwise", 1e-9},
      {"fourqubit.e_block_pairwise", 1e-9},
      {"fourqubit.sp_vs_rest", 1e-9},
      {"fourqubit.ep_vs_rest", 1e-9},
      {"fourqubit.spep_pairwise", 1e-9},
      {"fourqubit.sp_block_pairwise", 1e-9},
      {"fourqubit.ep_block_pairwise", 1e-9},
      {"fourqubit.tau_block", 1e-8},
      {"fourqubit.tau_block_primed", 1e-8},
  }};

  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < cfg.n; ++i) {
    const KrausPair<double> kp = kraus_from_unitary(random_unitary4(rng));
    const TwoQubitPure<double> psi = random_two_qubit_pure(rng);
    const InitialReduced<double> r0 = reduced_from_state(psi);
    const Vec8cd state = evolve3(kp, psi);

    const double tau_direct = three_tangle_direct(state);
    const auto [c0, c1] = evolved_coeffs(kp, psi);
    ids[kTauSimplified].update(
        std::abs(tau_direct - three_tangle_simplified(c0, c1)));
    ids[kTauKraus].update(
        std::abs(tau_direct - three_tangle_kraus(kp, r0.e0sq())));

    const OracleReport<double> oracle = full_report_direct(state);
    const auto bt = bipartition_tangles(kp, r0);
    const auto pt = pairwise_tangles(kp, r0);
    ids[kSpSe].update(std::abs(oracle.c2_sp_se - bt.c2_sp_se));
    ids[kSSpe].update(std::abs(oracle.c2_s_spe - bt.c2_s_spe));
    ids[kESsp].update(std::abs(oracle.c2_e_ssp - bt.c2_e_ssp));
    ids[kSps].update(std::abs(oracle.c2_sps - pt.c2_sps));
    ids[kSpe].update(std::abs(oracle.c2_spe - pt.c2_spe));
    ids[kSe].update(std::abs(oracle.c2_se - pt.c2_se));
    ids[kCkwSp].update(std::abs(oracle.ckw_sp));
    ids[kCkwS].update(std::abs(oracle.ckw_s));
    ids[kCkwE].update(std::abs(oracle.ckw_e));

    const auto [d_s, d_e] = ds_de(kp);
    ids[kDsDe].update(
        std::abs(d_s - (1.0 - d_e + std::abs(kraus_v(kp)))));

    const auto lb = lower_bounds(kp, r0);
    ids[kBoundSps].update(std::max(lb.lb_sps - pt.c2_sps, 0.0));
    ids[kBoundSpe].update(std::max(lb.lb_spe - pt.c2_spe, 0.0));
    ids[kBoundSe].update(std::max(lb.lb_se - pt.c2_se, 0.0));
  }

  for (int i = 0; i < cfg.n; ++i) {
    const KrausPair<double> kp = kraus_from_unitary(random_unitary4(rng));
    const KrausPair<double> kp_prime =
        kraus_from_unitary(random_unitary4(rng));
    const TwoQubitPure<double> psi = random_two_qubit_pure(rng);
    const auto rep = correspondence_check(kp, kp_prime, psi);
    ids[kFourSRest].update(rep.s_vs_rest);
    ids[kFourERest].update(rep.e_vs_rest);
    ids[kFourSePair].update(rep.se_pairwise);
    ids[kFourSBlock].update(rep.s_block_pairwise);
    ids[kFourEBlock].update(rep.e_block_pairwise);
    ids[kFourSpRest].update(rep.sp_vs_rest);
    ids[kFourEpRest].update(rep.ep_vs_rest);
    ids[kFourSpEpPair].update(rep.spep_pairwise);
    ids[kFourSpBlock].update(rep.sp_block_pairwise);
    ids[kFourEpBlock].update(rep.ep_block_pairwise);
    ids[kFourTau].update(rep.tau_block);
    ids[kFourTauPrimed].update(rep.tau_block_primed);
  }

  bool all_pass = true;
  for (const Identity& id : ids) {
    const double threshold = (cfg.tol > 0.0) ? cfg.tol : id.threshold;
    const bool pass = id.worst < threshold;
    all_pass = all_pass && pass;
    char line[128];
    std::snprintf(line, sizeof(line), "%-30s max_residual=%.3e threshold=%.1e %s",
                  id.name, id.worst, threshold, pass ? "PASS" : "FAIL");
    out << line << '\n';
  }
  out << "verified " << cfg.n << " three-qubit and " << cfg.n
      << " four-qubit instances (seed " << cfg.seed << ")\n";
  out << "result: " << (all_pass ? "PASS" : "FAIL") << '\n';
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// JSON configuration

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    throw std::invalid_argument("cannot read config file '" + path + "'");
  }
  return json::parse(file);
}

std::complex<double> complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  throw std::invalid_argument("complex entries must be numbers or strings");
}

Grid grid_from_json(const json& j) {
  if (j.is_number()) return fixed_grid(j.get<double>());
  if (j.is_string()) return parse_grid(j.get<std::string>());
  if (j.is_object()) {
    Grid g;
    g.start = j.at("start").get<double>();
    g.stop = j.at("stop").get<double>();
    g.count = j.at("count").get<int>();
    if (g.count < 1) throw std::invalid_argument("grid count must be >= 1");
    return g;
  }
  throw std::invalid_argument(
      "grid fields must be numbers, \"start:stop:count\" strings or objects");
}

template <typename Mat>
Mat mat_from_json(const json& j, int rows) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * rows) {
    std::ostringstream msg;
    msg << "matrix field must be an array of " << rows * rows << " entries";
    throw std::invalid_argument(msg.str());
  }
  Mat m;
  for (int i = 0; i < rows; ++i) {
    for (int k = 0; k < rows; ++k) {
      m(i, k) = complex_from_json(j[rows * i + k]);
    }
  }
  return m;
}

void channel_from_json(const json& j, ChannelSpec& spec) {
  if (j.contains("channel")) {
    spec.kind = channel_from_name(j.at("channel").get<std::string>());
  }
  if (j.contains("k0")) spec.k0 = mat_from_json<Mat2cd>(j.at("k0"), 2);
  if (j.contains("k1")) spec.k1 = mat_from_json<Mat2cd>(j.at("k1"), 2);
  if (j.contains("unitary")) {
    spec.unitary = mat_from_json<Mat4cd>(j.at("unitary"), 4);
  }
}

}  // namespace

void apply_json(const std::string& path, SweepConfig& cfg) {
  const json j = load_json(path);
  if (j.contains("figure")) {
    const int grid = j.contains("grid") ? j.at("grid").get<int>() : 50;
    const std::string keep_out = cfg.out;
    cfg = figure_preset(j.at("figure").get<int>(), grid);
    cfg.out = keep_out;
  }
  channel_from_json(j, cfg.channel);
  if (j.contains("p")) cfg.p = grid_from_json(j.at("p"));
  if (j.contains("rho_ee")) cfg.rho_ee = grid_from_json(j.at("rho_ee"));
  if (j.contains("e0sq")) cfg.e0sq = grid_from_json(j.at("e0sq"));
  if (j.contains("phi")) cfg.phi = j.at("phi").get<double>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
  if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
}

void apply_json(const std::string& path, ClassifyConfig& cfg) {
  const json j = load_json(path);
  channel_from_json(j, cfg.channel);
  if (j.contains("p")) cfg.p = j.at("p").get<double>();
  if (j.contains("rho_ee")) cfg.rho_ee = j.at("rho_ee").get<double>();
  if (j.contains("phi")) cfg.phi = j.at("phi").get<double>();
  if (j.contains("e0sq")) cfg.e0sq = j.at("e0sq").get<double>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
}

void apply_json(const std::string& path, VerifyConfig& cfg) {
  const json j = load_json(path);
  if (j.contains("n")) cfg.n = j.at("n").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
}

}  // namespace ktangle::cli
