// ssrlab: batch analyses of superselection structure. Subcommands parse a
// JSON input, run the corresponding toolkit analysis and emit a
// deterministic report (text with a timestamp line, or byte-stable JSON).
//
// Exit codes: 0 success, 1 property violation found by a check command,
// 2 parse/validation error, 3 dimension mismatch, 4 numerical failure.

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <ssr/algebra.hpp>
#include <ssr/channels.hpp>
#include <ssr/json_io.hpp>
#include <ssr/multiplier.hpp>
#include <ssr/sectors.hpp>
#include <ssr/way.hpp>

namespace {

using ssr::cplx;
using ssr::Matrix;
using ssr::ojson;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitParse = 2;
constexpr int kExitShape = 3;
constexpr int kExitNumerical = 4;

struct CommonOptions {
  std::string input_path;
  long long seed = 0;
  double tol = 1e-8;
  std::string format = "text";
  std::string output_path;
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_input = true) {
  if (with_input) cmd->add_option("--input", opt.input_path, "input JSON file")->required();
  cmd->add_option("--seed", opt.seed, "seed for randomized subroutines (SSRLAB_SEED overrides)");
  cmd->add_option("--tol", opt.tol, "numerical tolerance");
  cmd->add_option("--format", opt.format, "text|json")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--output", opt.output_path, "write the report here instead of stdout");
}

// SSRLAB_SEED wins over --seed when set
bool apply_seed_env(CommonOptions& opt) {
  const char* env = std::getenv("SSRLAB_SEED");
  if (env == nullptr || *env == '\0') return true;
  char* end = nullptr;
  const long long v = std::strtoll(env, &end, 10);
  if (end == nullptr || *end != '\0') return false;
  opt.seed = v;
  return true;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ojson report_header(const std::string& command, const CommonOptions& opt, const std::string& digest) {
  ojson h;
  h["tool"] = std::string(ssr::kToolName);
  h["version"] = std::string(ssr::kToolVersion);
  h["command"] = command;
  h["seed"] = opt.seed;
  h["tol"] = opt.tol;
  h["input_digest"] = digest;
  return h;
}

std::string utc_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

std::string text_header(const std::string& command, const CommonOptions& opt, const std::string& digest) {
  std::ostringstream os;
  os << ssr::kToolName << " " << ssr::kToolVersion << " -- " << command << "\n";
  os << "generated: " << utc_timestamp() << "\n";
  char tolbuf[32];
  std::snprintf(tolbuf, sizeof(tolbuf), "%g", opt.tol);
  os << "seed: " << opt.seed << "  tol: " << tolbuf << "  input: " << digest << "\n";
  return os.str();
}

void emit(const CommonOptions& opt, const std::string& body) {
  if (opt.output_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(opt.output_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + opt.output_path);
  out << body;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

ojson complex_field(cplx v) { return ssr::complex_to_json(v); }

// ---------------------------------------------------------------- analyze

int cmd_analyze(const CommonOptions& opt) {
  const std::string bytes = read_file(opt.input_path);
  const auto j = ssr::json::parse(bytes);
  if (!j.contains("matrices") || !j.at("matrices").is_array())
    throw std::invalid_argument("analyze input needs a \"matrices\" array");

  std::vector<Matrix> gens;
  for (const auto& m : j.at("matrices")) gens.push_back(ssr::parse_matrix(m));
  std::size_t n = 0;
  if (j.contains("dim")) n = j.at("dim").get<std::size_t>();
  for (const auto& g : gens) {
    if (!g.is_square()) throw ssr::ShapeError("analyze: generators must be square");
    if (n == 0) n = g.rows();
    if (g.rows() != n) throw ssr::ShapeError("analyze: generators have mixed dimensions");
  }
  if (n == 0) throw std::invalid_argument("analyze: empty generator list needs an explicit \"dim\"");

  const auto alg = ssr::generate_algebra(n, gens, opt.tol);
  const auto comm = ssr::commutant(alg, opt.tol);
  const bool ssr_present = comm.dim() > 1;
  const bool abelian_ssr = ssr::is_abelian(comm, std::max(opt.tol, 1e-8));
  const auto sectors = ssr::sectors_from_algebra(alg, static_cast<std::uint64_t>(opt.seed));
  const auto dirac = ssr::dirac_check(alg, static_cast<std::uint64_t>(opt.seed), opt.tol);

  ojson rep = report_header("analyze", opt, ssr::fnv1a_hex(bytes));
  rep["ambient_dim"] = n;
  rep["algebra_dimension"] = alg.dim();
  rep["closure_residual"] = alg.closure_residual;
  rep["commutant_dimension"] = comm.dim();
  rep["has_ssr"] = ssr_present;
  rep["abelian_ssr"] = abelian_ssr;
  rep["sector_count"] = sectors.count();
  {
    ojson dims = ojson::array();
    for (auto d : sectors.sector_dims) dims.push_back(d);
    rep["sector_dims"] = std::move(dims);
  }
  {
    ojson ps = ojson::array();
    for (const auto& p : sectors.projectors) ps.push_back(ssr::matrix_to_json(p));
    rep["classical_observable_basis"] = std::move(ps);
  }
  {
    ojson dj;
    dj["commutant_abelian"] = dirac.commutant_abelian;
    dj["maximal_abelian_dimension"] = dirac.maximal_abelian.dim();
    dj["is_maximal_in_full_algebra"] = dirac.is_maximal_in_full_algebra;
    dj["witness_present"] = dirac.witness.has_value();
    if (dirac.witness) dj["witness"] = ssr::matrix_to_json(*dirac.witness);
    rep["dirac"] = std::move(dj);
  }
  if (!abelian_ssr && ssr_present)
    rep["warning"] = "commutant is non-abelian: sector labels alone do not classify pure states";

  if (opt.format == "json") {
    emit(opt, ssr::dump_report(rep));
  } else {
    std::ostringstream os;
    os << text_header("analyze", opt, ssr::fnv1a_hex(bytes));
    os << "ambient dim: " << n << "; algebra dim: " << alg.dim() << "; commutant dim: " << comm.dim() << "\n";
    os << "sectors: " << sectors.count() << " (dims";
    for (std::size_t i = 0; i < sectors.sector_dims.size(); ++i)
      os << (i ? "," : " ") << sectors.sector_dims[i];
    os << "); SSR: " << yes_no(ssr_present) << "; abelian: " << yes_no(abelian_ssr) << "\n";
    os << "dirac: commutant abelian " << yes_no(dirac.commutant_abelian) << "; maximal abelian subalgebra dim "
       << dirac.maximal_abelian.dim() << "; maximal in B(H) " << yes_no(dirac.is_maximal_in_full_algebra) << "\n";
    if (!abelian_ssr && ssr_present)
      os << "warning: commutant is non-abelian: sector labels alone do not classify pure states\n";
    emit(opt, os.str());
  }
  return kExitOk;
}

// ----------------------------------------------------------------- reduce

int cmd_reduce(const CommonOptions& opt) {
  const std::string bytes = read_file(opt.input_path);
  const auto j = ssr::json::parse(bytes);
  if (!j.contains("state") || !j.contains("projectors"))
    throw std::invalid_argument("reduce input needs \"state\" and \"projectors\"");

  const auto state = ssr::make_density(ssr::parse_matrix(j.at("state")), 1e-8);
  std::vector<Matrix> ps;
  for (const auto& p : j.at("projectors")) ps.push_back(ssr::parse_matrix(p));
  for (const auto& p : ps)
    if (!p.is_square() || p.rows() != state.rho.rows()) throw ssr::ShapeError("reduce: projector dimension mismatch");
  const auto decomp = ssr::decomposition_from_projectors(ps, 1e-9);

  const auto red = ssr::reduce_state(state, decomp);
  const auto purity = ssr::classify_purity(state, decomp);

  ojson rep = report_header("reduce", opt, ssr::fnv1a_hex(bytes));
  rep["sector_count"] = decomp.count();
  {
    ojson w = ojson::array();
    for (double x : red.weights) w.push_back(x);
    rep["weights"] = std::move(w);
  }
  {
    ojson s = ojson::array();
    for (auto i : red.support) s.push_back(i);
    rep["support"] = std::move(s);
  }
  rep["coherence_defect"] = red.coherence_defect;
  rep["purity"] = std::string(ssr::to_string(purity));
  {
    ojson comps = ojson::array();
    for (const auto& c : red.components) comps.push_back(ssr::matrix_to_json(c));
    rep["components"] = std::move(comps);
  }

  if (opt.format == "json") {
    emit(opt, ssr::dump_report(rep));
  } else {
    std::ostringstream os;
    os << text_header("reduce", opt, ssr::fnv1a_hex(bytes));
    os << "weights:";
    for (double w : red.weights) os << " " << fmt(w);
    os << "\nsupport size: " << red.support.size() << "; coherence defect: " << fmt(red.coherence_defect) << "\n";
    os << "purity: " << ssr::to_string(purity) << "\n";
    if (red.coherence_defect > 1e-8) os << "flag: state carries coherences across sectors\n";
    emit(opt, os.str());
  }
  return kExitOk;
}

// -------------------------------------------------------------- way-check

int cmd_way_check(const CommonOptions& opt) {
  const std::string bytes = read_file(opt.input_path);
  const auto j = ssr::json::parse(bytes);
  const auto model = ssr::parse_measurement_model(j);
  const auto charge = ssr::compose_charge(ssr::parse_matrix(j.at("Q_S")), ssr::parse_matrix(j.at("Q_A")));

  ojson rep = report_header("way-check", opt, ssr::fnv1a_hex(bytes));
  std::ostringstream os;
  os << text_header("way-check", opt, ssr::fnv1a_hex(bytes));

  // the commutator norm of the system observable with its charge is
  // meaningful whether or not the model survives validation
  const double obstruction = ssr::way_obstruction(model.observable, charge.q_s);

  bool pass = false;
  try {
    const auto way = ssr::verify_way_theorem(model, charge, std::max(opt.tol, 1e-9));
    pass = way.chain_consistent && way.qs_block_diagonal && way.cross_check_agrees;
    rep["rejected"] = false;
    rep["vacuous"] = way.vacuous;
    rep["conservation_defect"] = way.conservation_defect;
    rep["chain_consistent"] = way.chain_consistent;
    rep["qs_block_diagonal"] = way.qs_block_diagonal;
    rep["max_constrained_element"] = way.max_constrained_element;
    rep["obstruction_norm"] = obstruction;
    rep["cross_check_agrees"] = way.cross_check_agrees;
    rep["verdict"] = pass ? "PASS" : "FAIL";
    {
      ojson pairs = ojson::array();
      for (const auto& pc : way.pairs) {
        ojson pj;
        pj["n"] = pc.n;
        pj["m"] = pc.m;
        pj["eigenvalue_gap"] = pc.eigenvalue_gap;
        pj["pointer_overlap"] = pc.pointer_overlap;
        pj["chain_spread"] = pc.chain_spread;
        pj["charge_element"] = complex_field(pc.charge_element);
        pj["constrained"] = pc.constrained;
        pairs.push_back(std::move(pj));
      }
      rep["pairs"] = std::move(pairs);
    }

    os << "verdict: " << (pass ? "PASS" : "FAIL") << (way.vacuous ? " (vacuous: zero charge)" : "") << "\n";
    os << "conservation defect ||[U,Q]||: " << fmt(way.conservation_defect) << "\n";
    os << "chain consistent: " << yes_no(way.chain_consistent)
       << "; Q_S block-diagonal w.r.t. P eigenspaces: " << yes_no(way.qs_block_diagonal) << "\n";
    os << "max |<s_n|Q_S|s_m>| over constrained pairs: " << fmt(way.max_constrained_element) << "\n";
    os << "obstruction norm ||[P,Q_S]||: " << fmt(obstruction) << "\n";
  } catch (const std::invalid_argument& e) {
    rep["rejected"] = true;
    rep["reason"] = std::string(e.what());
    rep["obstruction_norm"] = obstruction;
    rep["verdict"] = "FAIL";
    os << "verdict: FAIL (model rejected)\nreason: " << e.what() << "\n";
    os << "obstruction norm ||[P,Q_S]||: " << fmt(obstruction) << "\n";
  }

  emit(opt, opt.format == "json" ? ssr::dump_report(rep) : os.str());
  return pass ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- ray-rep

ojson similarity_to_json(const ssr::SimilarityVerdict& v) {
  ojson j;
  j["kind"] = v.kind == ssr::SimilarityKind::similar
                  ? "similar"
                  : (v.kind == ssr::SimilarityKind::not_similar ? "not_similar" : "inconclusive");
  j["note"] = v.note;
  j["candidates_checked"] = v.candidates_checked;
  if (v.kind == ssr::SimilarityKind::similar) {
    ojson a = ojson::array();
    for (const cplx& x : v.alpha) a.push_back(complex_field(x));
    j["alpha"] = std::move(a);
  }
  if (v.witness_pair) {
    ojson w;
    w["g"] = v.witness_pair->g;
    w["h"] = v.witness_pair->h;
    w["beta_1"] = complex_field(v.witness_beta_1);
    w["beta_2"] = complex_field(v.witness_beta_2);
    j["witness"] = std::move(w);
  }
  return j;
}

int cmd_ray_rep(const CommonOptions& opt) {
  const std::string bytes = read_file(opt.input_path);
  const auto j = ssr::json::parse(bytes);

  ojson rep = report_header("ray-rep", opt, ssr::fnv1a_hex(bytes));
  std::ostringstream os;
  os << text_header("ray-rep", opt, ssr::fnv1a_hex(bytes));

  // direct-sum query takes precedence
  if (j.contains("rep1") && j.contains("rep2")) {
    const auto g = ssr::parse_group(j.at("group"));
    const auto r1 = ssr::parse_projective_rep(j.at("rep1"), g);
    const auto r2 = ssr::parse_projective_rep(j.at("rep2"), g);
    const auto verdict = ssr::direct_sum_obstruction(r1, r2);
    const char* kind = verdict.kind == ssr::ObstructionKind::combinable
                           ? "combinable"
                           : (verdict.kind == ssr::ObstructionKind::obstructed ? "obstructed" : "inconclusive");
    rep["query"] = "direct_sum_obstruction";
    rep["verdict"] = kind;
    rep["similarity"] = similarity_to_json(verdict.similarity);
    if (verdict.kind == ssr::ObstructionKind::combinable) rep["joint_defect"] = verdict.joint_defect;
    if (verdict.kind == ssr::ObstructionKind::obstructed) rep["naive_defect"] = verdict.naive_defect;
    os << "direct sum: " << kind << "\n";
    if (verdict.similarity.witness_pair)
      os << "witness: beta(" << verdict.similarity.witness_pair->g << "," << verdict.similarity.witness_pair->h
         << ") = " << fmt(verdict.similarity.witness_beta_1.real()) << " vs "
         << fmt(verdict.similarity.witness_beta_2.real()) << "\n";
    emit(opt, opt.format == "json" ? ssr::dump_report(rep) : os.str());
    return kExitOk;
  }

  ssr::FiniteGroup group;
  ssr::Multiplier mult = ssr::Multiplier::trivial(ssr::FiniteGroup::cyclic(1));
  std::string source;
  if (j.contains("catalog")) {
    const std::string name = j.at("catalog").get<std::string>();
    bool found = false;
    for (const auto& e : ssr::builtin_examples())
      if (e.name == name) {
        group = e.group;
        mult = e.multiplier;
        source = "catalog:" + name;
        found = true;
        break;
      }
    if (!found) throw std::invalid_argument("unknown catalog entry: " + name);
  } else {
    group = ssr::parse_group(j.at("group"));
    if (j.contains("multiplier")) {
      mult = ssr::parse_multiplier(j.at("multiplier"), group);
      source = "multiplier table";
    } else if (j.contains("rep")) {
      mult = ssr::extract_multiplier(ssr::parse_projective_rep(j.at("rep"), group));
      source = "extracted from rep";
    } else {
      throw std::invalid_argument("ray-rep input needs \"multiplier\", \"rep\", \"rep1\"+\"rep2\", or \"catalog\"");
    }
  }

  const auto cocycle = ssr::check_cocycle(mult, std::max(opt.tol, 1e-10));
  rep["query"] = "multiplier";
  rep["source"] = source;
  rep["group_order"] = group.order;
  rep["cocycle_ok"] = cocycle.ok;
  rep["cocycle_worst_residual"] = cocycle.worst_residual;
  {
    ojson t = ojson::array();
    for (auto v : cocycle.worst_triple) t.push_back(v);
    rep["cocycle_worst_triple"] = std::move(t);
  }
  os << "cocycle: " << (cocycle.ok ? "OK" : "VIOLATED") << " (worst residual " << fmt(cocycle.worst_residual)
     << ")\n";

  if (cocycle.ok) {
    const auto tv = ssr::is_trivial(mult);
    rep["trivial"] = similarity_to_json(tv);
    os << "trivial: "
       << (tv.kind == ssr::SimilarityKind::similar
               ? "YES"
               : (tv.kind == ssr::SimilarityKind::not_similar ? "NO" : "INCONCLUSIVE"));
    if (tv.kind == ssr::SimilarityKind::not_similar && tv.witness_pair)
      os << " (witness beta(" << tv.witness_pair->g << "," << tv.witness_pair->h << ") = "
         << fmt(tv.witness_beta_1.real()) << ")";
    os << "\n";
  } else {
    os << "violating triple: (" << cocycle.worst_triple[0] << "," << cocycle.worst_triple[1] << ","
       << cocycle.worst_triple[2] << ")\n";
  }

  emit(opt, opt.format == "json" ? ssr::dump_report(rep) : os.str());
  return cocycle.ok ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------- channel

int cmd_channel(const CommonOptions& opt) {
  const std::string bytes = read_file(opt.input_path);
  const auto j = ssr::json::parse(bytes);
  const auto chan = ssr::parse_channel(j);

  ojson rep = report_header("channel", opt, ssr::fnv1a_hex(bytes));
  std::ostringstream os;
  os << text_header("channel", opt, ssr::fnv1a_hex(bytes));

  const double tol = std::max(opt.tol, 1e-9);
  const auto cptp = ssr::is_cptp(chan, tol);
  rep["kraus_count"] = chan.kraus.size();
  rep["cptp"] = cptp.pass;
  rep["tp_defect"] = cptp.tp_defect;
  rep["min_choi_eigenvalue"] = cptp.min_choi_eigenvalue;
  os << "cptp: " << (cptp.pass ? "PASS" : "FAIL") << " (tp defect " << fmt(cptp.tp_defect)
     << ", min Choi eigenvalue " << fmt(cptp.min_choi_eigenvalue) << ")\n";

  bool covariance_ok = true;
  if (j.contains("rep")) {
    const auto urep = ssr::parse_unitary_rep(j.at("rep"));
    const auto cov = ssr::is_covariant(chan, urep, tol);
    covariance_ok = cov.pass;
    rep["covariant"] = cov.pass;
    rep["covariance_residual"] = cov.max_residual;
    os << "covariant: " << (cov.pass ? "PASS" : "FAIL") << " (max residual " << fmt(cov.max_residual) << ")\n";

    const auto tw = ssr::twirl(chan, urep);
    const auto tw_cov = ssr::is_covariant(tw, urep, tol);
    rep["twirl_kraus_count"] = tw.kraus.size();
    rep["twirl_covariant"] = tw_cov.pass;
    rep["twirl_covariance_residual"] = tw_cov.max_residual;
    os << "twirled channel covariant: " << (tw_cov.pass ? "PASS" : "FAIL") << " (max residual "
       << fmt(tw_cov.max_residual) << ")\n";

    const auto sectors = ssr::gauge_sectors(urep, static_cast<std::uint64_t>(opt.seed));
    ojson dims = ojson::array();
    for (auto d : sectors.sector_dims) dims.push_back(d);
    rep["gauge_sector_dims"] = std::move(dims);
    os << "gauge sectors: " << sectors.count() << " (dims";
    for (std::size_t i = 0; i < sectors.sector_dims.size(); ++i) os << (i ? "," : " ") << sectors.sector_dims[i];
    os << ")\n";
  }

  const bool pass = cptp.pass && covariance_ok;
  rep["verdict"] = pass ? "PASS" : "FAIL";
  os << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
  emit(opt, opt.format == "json" ? ssr::dump_report(rep) : os.str());
  return pass ? kExitOk : kExitViolation;
}

// ------------------------------------------------------------------- demo

int cmd_demo(const std::string& name, const CommonOptions& opt) {
  ojson rep = report_header("demo", opt, ssr::fnv1a_hex(name));
  rep["name"] = name;
  std::ostringstream os;
  os << text_header("demo " + name, opt, ssr::fnv1a_hex(name));

  if (name == "einselection") {
    const Matrix p1 = ssr::direct_sum({Matrix::identity(2), Matrix::zero(2, 2)});
    const Matrix p2 = ssr::direct_sum({Matrix::zero(2, 2), Matrix::identity(2)});
    const auto decomp = ssr::decomposition_from_projectors({p1, p2});
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix plus = Matrix::column({r, 0, r, 0});
    const double damping = 0.5;
    const int steps = 16;
    const auto traj = ssr::einselection_sim(ssr::DensityMatrix{plus * adjoint(plus)}, decomp, damping, steps);
    const double d0 = traj.front().coherence_defect;

    ojson table = ojson::array();
    os << "dephasing map at damping " << damping << ", defect(k) vs (1-damping)^k * defect(0)\n";
    os << "step  defect        closed_form   weight_1  weight_2\n";
    double worst = 0.0;
    for (const auto& pt : traj) {
      const double closed = d0 * std::pow(1.0 - damping, pt.step);
      worst = std::max(worst, std::abs(pt.coherence_defect - closed));
      ojson row;
      row["step"] = pt.step;
      row["coherence_defect"] = pt.coherence_defect;
      row["closed_form"] = closed;
      row["weights"] = ojson::array({pt.weights[0], pt.weights[1]});
      table.push_back(std::move(row));
      char line[128];
      std::snprintf(line, sizeof(line), "%4d  %-12.6g  %-12.6g  %-8.6g  %-8.6g\n", pt.step, pt.coherence_defect,
                    closed, pt.weights[0], pt.weights[1]);
      os << line;
    }
    rep["trajectory"] = std::move(table);
    rep["max_closed_form_deviation"] = worst;
    os << "max deviation from closed form: " << fmt(worst) << "\n";
    emit(opt, opt.format == "json" ? ssr::dump_report(rep) : os.str());
    return kExitOk;
  }

  if (name == "univalence") {
    const auto catalog = ssr::builtin_examples();
    const auto& trivial_entry = catalog[0];
    const auto& pauli_entry = catalog[1];
    const auto verdict = ssr::direct_sum_obstruction(*trivial_entry.rep, *pauli_entry.rep);
    rep["rep_1"] = trivial_entry.name;
    rep["rep_2"] = pauli_entry.name;
    rep["verdict"] = verdict.kind == ssr::ObstructionKind::obstructed ? "obstructed" : "combinable";
    rep["similarity"] = similarity_to_json(verdict.similarity);
    rep["naive_defect"] = verdict.naive_defect;
    os << "blocks: " << trivial_entry.description << "  vs  " << pauli_entry.description << "\n";
    os << "verdict: " << (verdict.kind == ssr::ObstructionKind::obstructed ? "obstructed" : "combinable") << "\n";
    if (verdict.similarity.witness_pair)
      os << "multiplier witness: beta(" << verdict.similarity.witness_pair->g << ","
         << verdict.similarity.witness_pair->h << ") = " << fmt(verdict.similarity.witness_beta_1.real()) << " vs "
         << fmt(verdict.similarity.witness_beta_2.real()) << "\n";
    os << "non-scalar defect of the naive direct sum: " << fmt(verdict.naive_defect) << "\n";
    os << "no ray representation on the direct sum restricts to both blocks\n";
    emit(opt, opt.format == "json" ? ssr::dump_report(rep) : os.str());
    return kExitOk;
  }

  if (name == "way") {
    const auto model = ssr::builtin_conserving_model();
    const auto charge = ssr::compose_charge(ssr::pauli_z(), ssr::pauli_z());
    const auto way = ssr::verify_way_theorem(model, charge, std::max(opt.tol, 1e-9));
    rep["conserving_model"] = ojson{{"chain_consistent", way.chain_consistent},
                                    {"qs_block_diagonal", way.qs_block_diagonal},
                                    {"conservation_defect", way.conservation_defect},
                                    {"obstruction_norm", way.obstruction_norm}};
    os << "conserving qubit model: chain consistent " << yes_no(way.chain_consistent)
       << ", Q_S block-diagonal " << yes_no(way.qs_block_diagonal) << "\n";

    const double obstruction = ssr::way_obstruction(ssr::pauli_x(), ssr::pauli_z());
    rep["sigma_x_vs_sigma_z_obstruction"] = obstruction;
    os << "||[sigma_x, sigma_z]||_HS = " << fmt(obstruction) << " (nonzero: exact measurement impossible)\n";

    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<Matrix> s = {Matrix::column({r, r}), Matrix::column({r, -r})};
    const auto attempt =
        ssr::build_measurement_unitary(s, {Matrix::column({1, 0}), Matrix::column({0, 1})}, Matrix::column({r, r}),
                                       ssr::CompletionStrategy::conserving, &charge);
    rep["conserving_completion_feasible"] = attempt.feasible;
    rep["conserving_completion_defect"] = attempt.feasibility_defect;
    os << "conserving completion for measuring sigma_x: "
       << (attempt.feasible ? "found (unexpected)" : "infeasible") << ", Gram defect "
       << fmt(attempt.feasibility_defect) << "\n";
    emit(opt, opt.format == "json" ? ssr::dump_report(rep) : os.str());
    return kExitOk;
  }

  std::cerr << "unknown demo: " << name << " (available: einselection, univalence, way)\n";
  return kExitParse;
}

int run_guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const ssr::ShapeError& e) {
    std::cerr << "shape error: " << e.what() << "\n";
    return kExitShape;
  } catch (const ssr::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ssr::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitParse;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator-algebra toolkit for superselection structure"};
  app.require_subcommand(1);

  CommonOptions analyze_opt, reduce_opt, way_opt, ray_opt, chan_opt, demo_opt;
  std::string demo_name;

  auto* analyze = app.add_subcommand("analyze", "algebra, commutant, sectors and Dirac report from generators");
  add_common(analyze, analyze_opt);
  auto* reduce = app.add_subcommand("reduce", "state reduction against a projector family");
  add_common(reduce, reduce_opt);
  auto* way = app.add_subcommand("way-check", "measurement-theorem verification for a conserved charge");
  add_common(way, way_opt);
  auto* ray = app.add_subcommand("ray-rep", "multiplier/cocycle analysis and direct-sum obstruction");
  add_common(ray, ray_opt);
  auto* chan = app.add_subcommand("channel", "CPTP, covariance and twirling report");
  add_common(chan, chan_opt);
  auto* demo = app.add_subcommand("demo", "built-in scenarios: einselection, univalence, way");
  demo->add_option("name", demo_name, "scenario name")->required();
  add_common(demo, demo_opt, /*with_input=*/false);

  CLI11_PARSE(app, argc, argv);

  CommonOptions* opt = nullptr;
  std::function<int()> fn;
  if (*analyze) {
    opt = &analyze_opt;
    fn = [&] { return cmd_analyze(analyze_opt); };
  } else if (*reduce) {
    opt = &reduce_opt;
    fn = [&] { return cmd_reduce(reduce_opt); };
  } else if (*way) {
    opt = &way_opt;
    fn = [&] { return cmd_way_check(way_opt); };
  } else if (*ray) {
    opt = &ray_opt;
    fn = [&] { return cmd_ray_rep(ray_opt); };
  } else if (*chan) {
    opt = &chan_opt;
    fn = [&] { return cmd_channel(chan_opt); };
  } else {
    opt = &demo_opt;
    fn = [&] { return cmd_demo(demo_name, demo_opt); };
  }

  if (!apply_seed_env(*opt)) {
    std::cerr << "invalid SSRLAB_SEED value\n";
    return kExitParse;
  }
  return run_guarded(fn);
}
