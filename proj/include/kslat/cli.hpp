#pragma once

// Command-line front end. Kept in a header so the test suites can drive it
// in-process; tools/kslat.cpp only forwards argv.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kslat/burnside.hpp"
#include "kslat/io.hpp"
#include "kslat/lattice.hpp"
#include "kslat/valuation.hpp"

namespace kslat::cli {

enum ExitCode : int { ok = 0, invalid_input = 1, unsat = 2, cap_exceeded = 3 };

struct Report {
  std::string command;
  int exit_code = ok;
  Json verdicts = Json::object();
  Json residuals = Json::object();
  Json error = nullptr;
  std::vector<std::string> lines;
  double timing_ms = 0.0;

  Json to_json() const {
    Json j;
    j["command"] = command;
    j["ok"] = exit_code == ok;
    j["exit_code"] = exit_code;
    j["verdicts"] = verdicts;
    j["residuals"] = residuals;
    j["error"] = error;
    j["timing_ms"] = timing_ms;
    return j;
  }
};

namespace detail {

inline std::string fmt_real(double x) {
  if (std::abs(x) < 5e-13) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string fmt_complex(Complex z) {
  const double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
  if (im == 0.0) return fmt_real(re);
  if (re == 0.0) return fmt_real(im) + "i";
  return fmt_real(re) + (im < 0 ? "-" : "+") + fmt_real(std::abs(im)) + "i";
}

// Display-only phase convention: first non-negligible entry real and positive.
inline StateVector display_phase(const StateVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) return v * (std::conj(v(i)) / std::abs(v(i)));
  }
  return v;
}

inline std::string fmt_vector(const StateVector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_complex(v(i));
  return s + ")";
}

inline std::string fmt_subspace(const Subspace& u) {
  if (u.is_zero()) return "{0}";
  if (u.is_full()) return "C^" + std::to_string(u.ambient_dim());
  std::string s = "span{";
  const auto vs = u.basis_vectors();
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? ", " : "") + fmt_vector(display_phase(vs[i]));
  return s + "}";
}

inline Json vector_json(const StateVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(kslat::detail::complex_to_json(v(i)));
  return out;
}

inline Json subspace_json(const Subspace& u, const std::string& label) {
  Json basis = Json::array();
  for (const auto& v : u.basis_vectors()) basis.push_back(vector_json(display_phase(v)));
  Json j;
  j["label"] = label;
  j["dim"] = u.dim();
  j["basis"] = std::move(basis);
  return j;
}

inline Json family_json(const LatticeFamily& f) {
  Json elems = Json::array();
  for (std::size_t i = 0; i < f.size(); ++i) elems.push_back(subspace_json(f.elements()[i], f.labels()[i]));
  return elems;
}

inline void family_lines(Report& r, const LatticeFamily& f, const std::string& indent) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    r.lines.push_back(indent + f.labels()[i] + " = " + fmt_subspace(f.elements()[i]));
  }
}

inline std::string identity_label(const ContextCollection& c, std::size_t id) { return c.projector(id).label(); }

inline std::vector<LatticeFamily> context_lattices(const ContextCollection& c, const TolerancePolicy& tol) {
  std::vector<LatticeFamily> out;
  for (const auto& ctx : c.contexts()) out.push_back(lat_context(ctx, tol));
  return out;
}

inline Json search_json(const ContextCollection& c, const AssignmentSearchResult& res) {
  Json j;
  j["status"] = res.status == SearchStatus::sat ? "SAT" : "UNSAT";
  if (res.assignment) {
    Json a = Json::object();
    for (std::size_t id = 0; id < res.assignment->size(); ++id) a[identity_label(c, id)] = (*res.assignment)[id];
    j["assignment"] = std::move(a);
  } else {
    j["assignment"] = nullptr;
  }
  j["nodes_explored"] = res.nodes_explored;
  return j;
}

inline std::string truth_text(TruthValue v) { return std::string(to_string(v)); }

// ---- subcommands -----------------------------------------------------------

inline void cmd_validate(Report& r, const ContextCollection& c) {
  double herm = 0.0, idem = 0.0, pair = 0.0, res = 0.0;
  Json ctxs = Json::array();
  r.lines.push_back("valid: " + std::to_string(c.contexts().size()) + " maximal contexts on C^" +
                    std::to_string(c.ambient_dim()) + ", " + std::to_string(c.identity_count()) +
                    " distinct projectors");
  for (std::size_t k = 0; k < c.contexts().size(); ++k) {
    const auto& ctx = c.contexts()[k];
    Json members = Json::array();
    std::string ranks;
    for (std::size_t m = 0; m < ctx.size(); ++m) {
      const auto& p = ctx.members()[m];
      herm = std::max(herm, p.hermitian_residual());
      idem = std::max(idem, p.idempotent_residual());
      Json mj;
      mj["label"] = p.label();
      mj["rank"] = p.rank();
      mj["identity"] = c.identity_of(k, m);
      members.push_back(std::move(mj));
      ranks += (ranks.empty() ? "" : " ") + std::to_string(p.rank());
    }
    pair = std::max(pair, ctx.pairwise_residual());
    res = std::max(res, ctx.resolution_residual());
    Json cj;
    cj["id"] = ctx.id();
    cj["members"] = std::move(members);
    ctxs.push_back(std::move(cj));
    r.lines.push_back("  context " + ctx.id() + ": " + std::to_string(ctx.size()) + " members, ranks [" + ranks +
                      "], max|PiPj| = " + fmt_real(ctx.pairwise_residual()) +
                      ", max|sum-I| = " + fmt_real(ctx.resolution_residual()));
  }
  r.verdicts["valid"] = true;
  r.verdicts["ambient_dim"] = c.ambient_dim();
  r.verdicts["identities"] = c.identity_count();
  r.verdicts["contexts"] = std::move(ctxs);
  r.residuals["max_hermitian"] = herm;
  r.residuals["max_idempotent"] = idem;
  r.residuals["max_pairwise_product"] = pair;
  r.residuals["max_resolution"] = res;
}

inline void cmd_lattice(Report& r, const ContextCollection& c, const TolerancePolicy& tol,
                        const std::string& only) {
  Json lats = Json::array();
  bool found = only.empty();
  for (const auto& ctx : c.contexts()) {
    if (!only.empty() && ctx.id() != only) continue;
    found = true;
    const auto f = lat_context(ctx, tol);
    Json lj;
    lj["context"] = ctx.id();
    lj["size"] = f.size();
    lj["closed_under_meet_join"] = is_closed_under_meet_join(f);
    lj["elements"] = family_json(f);
    lats.push_back(std::move(lj));
    r.lines.push_back("Lat(" + ctx.id() + "): " + std::to_string(f.size()) + " elements");
    family_lines(r, f, "  ");
  }
  if (!found) throw Error(ErrorKind::ValidationError, "no context named '" + only + "'");
  r.verdicts["lattices"] = std::move(lats);
}

inline void cmd_intersect(Report& r, const ContextCollection& c, const TolerancePolicy& tol) {
  const auto lats = context_lattices(c, tol);
  const auto meet_all = lat_intersect(lats);
  Json sizes = Json::object();
  for (std::size_t k = 0; k < lats.size(); ++k) sizes[c.contexts()[k].id()] = lats[k].size();
  r.verdicts["context_lattice_sizes"] = std::move(sizes);
  r.verdicts["intersection"] = family_json(meet_all);
  r.verdicts["trivial"] = is_trivial(meet_all);
  r.lines.push_back("intersection of " + std::to_string(lats.size()) + " context lattices: " +
                    std::to_string(meet_all.size()) + " elements");
  family_lines(r, meet_all, "  ");
  r.lines.push_back(is_trivial(meet_all) ? "trivial: only {0} and H are invariant under every context"
                                         : "non-trivial: a proper subspace is invariant under every context");
}

inline void cmd_irreducible(Report& r, const ContextCollection& c, const TolerancePolicy& tol) {
  const auto n = c.ambient_dim();
  if (n < 2) throw Error(ErrorKind::AmbientDimOne, "irreducibility needs dim(H) > 1");
  const auto gens = generators_of(c);
  const auto closure = algebra_closure(gens, tol);
  IrreducibilityReport rep;
  rep.ambient_dim = n;
  rep.algebra_dimension = closure.dimension;
  rep.irreducible = closure.saturated;
  if (!rep.irreducible && n <= default_witness_cap) {
    rep.witness_searched = true;
    rep.witness = invariant_subspace_witness(gens, tol);
  }
  const bool lattice_trivial = is_trivial(lat_intersect(context_lattices(c, tol)));
  r.verdicts["algebra_dimension"] = closure.dimension;
  r.verdicts["full_dimension"] = n * n;
  r.verdicts["generations"] = closure.generations;
  r.verdicts["irreducible"] = rep.irreducible;
  r.verdicts["witness_searched"] = rep.witness_searched;
  r.verdicts["witness"] = rep.witness ? subspace_json(*rep.witness, "witness") : Json(nullptr);
  r.verdicts["lattice_intersection_trivial"] = lattice_trivial;
  r.verdicts["routes_agree"] = lattice_trivial == rep.irreducible;
  r.verdicts["interpretation"] = "irreducible means the unital algebra generated by the projectors is all of L(H)";
  r.lines.push_back("generated algebra: dimension " + std::to_string(closure.dimension) + " of " +
                    std::to_string(n * n) + " after " + std::to_string(closure.generations) + " product rounds");
  r.lines.push_back(rep.irreducible ? "irreducible: the projectors generate all of L(H)"
                                    : "reducible: the generated algebra is a proper subalgebra of L(H)");
  if (rep.witness) r.lines.push_back("witness invariant subspace: " + fmt_subspace(*rep.witness));
  else if (rep.witness_searched) r.lines.push_back("witness search found no common invariant subspace");
  r.lines.push_back(std::string("lattice route: intersection of context lattices is ") +
                    (lattice_trivial ? "trivial" : "non-trivial") +
                    (lattice_trivial == rep.irreducible ? " (agrees)" : " (differs from the algebra route)"));
}

inline void cmd_valuate(Report& r, const ContextCollection& c, const TolerancePolicy& tol, const StateVector& psi) {
  const auto rep = bivalence_report(psi, c, tol);
  Json ctxs = Json::array();
  r.lines.push_back("state " + fmt_vector(psi));
  for (std::size_t k = 0; k < c.contexts().size(); ++k) {
    const auto& ctx = c.contexts()[k];
    const auto& cv = rep.by_context[k];
    Json values = Json::object();
    std::string line = "  context " + ctx.id() + ":";
    for (std::size_t m = 0; m < ctx.size(); ++m) {
      values[ctx.members()[m].label()] = truth_text(cv.values[m]);
      line += " v(" + ctx.members()[m].label() + ")=" + truth_text(cv.values[m]);
    }
    line += cv.sum ? "  sum=" + std::to_string(*cv.sum) : "  non-bivalent for this state";
    r.lines.push_back(line);
    Json cj;
    cj["id"] = ctx.id();
    cj["values"] = std::move(values);
    cj["sum"] = cv.sum ? Json(*cv.sum) : Json(nullptr);
    cj["bivalent"] = cv.bivalent();
    ctxs.push_back(std::move(cj));
  }
  Json undefined = Json::array();
  for (auto id : rep.undefined_identities) undefined.push_back(identity_label(c, id));
  r.verdicts["state"] = vector_json(psi);
  r.verdicts["contexts"] = std::move(ctxs);
  r.verdicts["undefined"] = undefined;
  r.verdicts["bivalent"] = rep.bivalent();
  r.lines.push_back(rep.bivalent() ? "bivalent at this state"
                                   : "bivalence fails: " + std::to_string(rep.undefined_identities.size()) +
                                         " projectors have no truth value at this state");
}

inline void cmd_ks_search(Report& r, const ContextCollection& c, const TolerancePolicy& tol) {
  const auto res = ks_assignment_search(c);
  const auto sj = search_json(c, res);
  for (const auto& [k, v] : sj.items()) r.verdicts[k] = v;
  bool lattice_trivial = false;
  try {
    lattice_trivial = is_trivial(lat_intersect(context_lattices(c, tol)));
    r.verdicts["lattice_intersection_trivial"] = lattice_trivial;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SubsetLimitExceeded) throw;
    r.verdicts["lattice_intersection_trivial"] = nullptr;
  }
  r.lines.push_back(std::string(res.status == SearchStatus::sat ? "SAT" : "UNSAT") + " after " +
                    std::to_string(res.nodes_explored) + " nodes");
  if (res.assignment) {
    std::string ones;
    for (std::size_t id = 0; id < res.assignment->size(); ++id) {
      if ((*res.assignment)[id] == 1) ones += (ones.empty() ? "" : ", ") + identity_label(c, id);
    }
    r.lines.push_back("  value 1 on: " + ones);
  } else {
    r.lines.push_back("  no noncontextual 0/1 assignment exists");
  }
  if (r.verdicts["lattice_intersection_trivial"].is_boolean()) {
    r.lines.push_back(std::string("  lattice intersection: ") + (lattice_trivial ? "trivial" : "non-trivial"));
  }
  if (res.status == SearchStatus::unsat) r.exit_code = unsat;
}

/// The reference C^2 example: lattices of the three Pauli contexts, their
/// intersection, the generated algebra, the valuation of (1,0), and the
/// noncontextual assignment search.
inline void cmd_demo_pauli(Report& r, const TolerancePolicy& tol) {
  using namespace std::complex_literals;
  const auto c = pauli_contexts(tol);
  const auto lats = context_lattices(c, tol);

  // The eigenvector lines as they are usually written down for each axis.
  auto line = [&](Complex a, Complex b) {
    const StateVector v[] = {StateVector{{a, b}}};
    return Subspace::from_span(2, v, tol);
  };
  const std::vector<std::vector<Subspace>> expected_lines = {
      {line(1.0, 0.0), line(0.0, 1.0)}, {line(1.0, 1.0), line(1.0, -1.0)}, {line(1.0i, 1.0), line(1.0, 1.0i)}};

  Json lj = Json::object();
  bool all_match = true;
  for (std::size_t k = 0; k < lats.size(); ++k) {
    LatticeFamily expected(2, tol);
    expected.insert(Subspace::zero(2), "{0}");
    for (const auto& u : expected_lines[k]) expected.insert(u, "line");
    expected.insert(Subspace::full(2), "H");
    const bool match = same_elements(lats[k], expected);
    all_match = all_match && match;
    Json j;
    j["size"] = lats[k].size();
    j["matches_expected"] = match;
    j["elements"] = family_json(lats[k]);
    lj[c.contexts()[k].id()] = std::move(j);
    r.lines.push_back("Lat(Sigma^" + c.contexts()[k].id() + "): " + std::to_string(lats[k].size()) + " elements" +
                      (match ? "" : "  [MISMATCH]"));
    family_lines(r, lats[k], "  ");
  }
  const auto meet_all = lat_intersect(lats);
  const bool trivial = is_trivial(meet_all);
  r.lines.push_back("Lat(Sigma^z) ∩ Lat(Sigma^x) ∩ Lat(Sigma^y) = " + std::string(trivial ? "{ {0}, C^2 }" : "non-trivial"));

  const auto gens = generators_of(c);
  const auto irr = is_irreducible(gens, tol);
  r.lines.push_back("algebra generated by the six projectors: dimension " + std::to_string(irr.algebra_dimension) +
                    " = 2^2, " + (irr.irreducible ? "irreducible" : "reducible"));

  const StateVector psi{{1.0, 0.0}};
  const auto biv = bivalence_report(psi, c, tol);
  Json vals = Json::object();
  for (std::size_t id = 0; id < c.identity_count(); ++id) {
    vals[identity_label(c, id)] = truth_text(biv.by_identity[id]);
  }
  const auto& z = biv.by_context.front();
  r.lines.push_back("state (1, 0): v(P1^z)=" + truth_text(z.values[0]) + " v(P2^z)=" + truth_text(z.values[1]) +
                    ", sum over Sigma^z = " + (z.sum ? std::to_string(*z.sum) : std::string("undefined")));
  std::string undef;
  for (auto id : biv.undefined_identities) undef += (undef.empty() ? "" : ", ") + identity_label(c, id);
  r.lines.push_back("  undefined on: " + undef);

  const auto search = ks_assignment_search(c);
  r.lines.push_back(std::string("noncontextual assignment search: ") +
                    (search.status == SearchStatus::sat ? "SAT" : "UNSAT") +
                    " (no projector is shared between contexts)");

  Json valuation;
  valuation["state"] = vector_json(psi);
  valuation["values"] = std::move(vals);
  valuation["sigma_z_sum"] = z.sum ? Json(*z.sum) : Json(nullptr);
  Json undefined = Json::array();
  for (auto id : biv.undefined_identities) undefined.push_back(identity_label(c, id));
  valuation["undefined"] = std::move(undefined);
  valuation["bivalent"] = biv.bivalent();

  r.verdicts["lattices"] = std::move(lj);
  r.verdicts["lattices_match_expected"] = all_match;
  r.verdicts["intersection"] = family_json(meet_all);
  r.verdicts["intersection_trivial"] = trivial;
  r.verdicts["algebra_dimension"] = irr.algebra_dimension;
  r.verdicts["irreducible"] = irr.irreducible;
  r.verdicts["valuation"] = std::move(valuation);
  r.verdicts["ks_search"] = search_json(c, search);
}

inline void render(const Report& r, const std::string& format, std::ostream& out) {
  if (format == "json") {
    out << r.to_json().dump(2) << '\n';
    return;
  }
  for (const auto& l : r.lines) out << l << '\n';
  if (!r.error.is_null()) out << "error: " << r.error["message"].get<std::string>() << '\n';
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SubsetLimitExceeded:
    case ErrorKind::SearchCapExceeded: return cap_exceeded;
    default: return invalid_input;
  }
}

}  // namespace detail

/// Parses arguments, runs one subcommand and writes its report. Returns the
/// process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kslat: invariant-subspace lattices, Burnside irreducibility and bivaluation of projector contexts"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  ToleranceOverrides overrides;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--eps-rank", overrides.eps_rank, "Relative singular-value cutoff");
  app.add_option("--eps-entry", overrides.eps_entry, "Max-entry residual for operator identities");
  app.add_option("--eps-subspace", overrides.eps_subspace, "Projector distance for subspace equality");

  std::string file;
  std::string context_id;
  std::string state_text;
  std::string demo_name;
  std::string emit_path;

  auto* validate = app.add_subcommand("validate", "Check projector and maximal-context axioms");
  auto* lattice = app.add_subcommand("lattice", "List the invariant-subspace lattice of each context");
  auto* intersect = app.add_subcommand("intersect", "Intersect the context lattices and test triviality");
  auto* irreducible = app.add_subcommand("irreducible", "Algebra-closure irreducibility test with witness search");
  auto* valuate_cmd = app.add_subcommand("valuate", "State-dependent bivaluation of every projector");
  auto* ks = app.add_subcommand("ks-search", "Search for a noncontextual 0/1 assignment (exit 2 if none)");
  auto* demo = app.add_subcommand("demo", "Built-in demonstrations");
  for (auto* sub : {validate, lattice, intersect, irreducible, valuate_cmd, ks}) {
    sub->add_option("file", file, "Operator-set document (JSON)")->required()->check(CLI::ExistingFile);
  }
  lattice->add_option("--context", context_id, "Only this context");
  valuate_cmd->add_option("--state", state_text, "State as \"re,im;re,im;...\"")->required();
  demo->add_option("name", demo_name, "Demo to run")->required()->check(CLI::IsMember({"pauli"}));
  demo->add_option("--emit", emit_path, "Also write the demo collection as a document");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : invalid_input;
  }

  Report report;
  const auto started = std::chrono::steady_clock::now();
  try {
    if (demo->parsed()) {
      report.command = "demo " + demo_name;
      const auto tol = overrides.apply(TolerancePolicy{}).check();
      detail::cmd_demo_pauli(report, tol);
      if (!emit_path.empty()) {
        std::ofstream f(emit_path);
        f << emit(pauli_contexts(tol)).dump(2) << '\n';
        if (!f) throw Error(ErrorKind::ParseError, "cannot write '" + emit_path + "'");
      }
    } else {
      auto* sub = app.get_subcommands().front();
      report.command = sub->get_name();
      const auto collection = ingest(file, overrides);
      const auto& tol = collection.tolerance();
      if (sub == validate) detail::cmd_validate(report, collection);
      else if (sub == lattice) detail::cmd_lattice(report, collection, tol, context_id);
      else if (sub == intersect) detail::cmd_intersect(report, collection, tol);
      else if (sub == irreducible) detail::cmd_irreducible(report, collection, tol);
      else if (sub == valuate_cmd) detail::cmd_valuate(report, collection, tol, parse_state(state_text));
      else if (sub == ks) detail::cmd_ks_search(report, collection, tol);
    }
  } catch (const Error& e) {
    report.exit_code = detail::exit_code_for(e.kind());
    report.verdicts = Json::object();
    report.lines.clear();
    Json ej;
    ej["kind"] = std::string(to_string(e.kind()));
    ej["cause"] = e.cause() ? Json(std::string(to_string(*e.cause()))) : Json(nullptr);
    ej["message"] = e.what();
    ej["residual"] = e.residual() ? Json(*e.residual()) : Json(nullptr);
    report.error = std::move(ej);
    if (report.command == "validate") report.verdicts["valid"] = false;
  }
  report.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  detail::render(report, format, out);
  return report.exit_code;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace kslat::cli
