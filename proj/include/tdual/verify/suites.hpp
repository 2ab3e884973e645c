#pragma once

#include <chrono>
#include <functional>
#include <string>

#include "tdual/algebra/surjectivity.hpp"
#include "tdual/core/module_verify.hpp"
#include "tdual/core/random_instance.hpp"
#include "tdual/io/report.hpp"
#include "tdual/plancherel/fourier.hpp"
#include "tdual/restriction/adjoint.hpp"
#include "tdual/ups/setting.hpp"

namespace tdual::verify {

struct Options {
  std::uint64_t seed = 1;
  double tol = 1e-9;
  int instances = 50;         ///< random instances for the core checks
  int norm_samples = 100;     ///< random elements per summand
  int adjunction_pairs = 20;  ///< random pairs per spec
  int wave_packet_pairs = 50;
  Index max_spec_dim = 48;    ///< largest total fiber dimension given to the exact module checks
};

namespace detail {

inline Check timed(std::string name, std::string topic, const std::function<void(Check&)>& body) {
  Check c;
  c.name = std::move(name);
  c.topic = std::move(topic);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("error: ") + e.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

inline std::string fmt(double v) { return io::format_residual(v); }

}  // namespace detail

// ---------------------------------------------------------------- core

inline Check module_structure_random(const Options& o) {
  return detail::timed("module structure on random instances",
                       "e -> T_e identifies the module with the equivariant compact operators", [&](Check& c) {
                         Rng rng(o.seed);
                         bool ok = true;
                         for (int i = 0; i < o.instances; ++i) {
                           const auto inst = random_instance(rng);
                           const auto r = verify_module_structure(inst.module, inst.action, o.tol, o.seed + i);
                           c.residual = std::max(c.residual, r.max_residual());
                           ok = ok && r.passed;
                         }
                         c.passed = ok && c.residual <= o.tol;
                         c.detail = std::to_string(o.instances) + " instances";
                       });
}

inline Check compacts_iso_random(const Options& o) {
  return detail::timed("compact operators on random instances",
                       "S -> S (x) 1 is an isomorphism onto the invariant compact operators", [&](Check& c) {
                         Rng rng(o.seed + 1000);
                         bool ok = true;
                         for (int i = 0; i < o.instances; ++i) {
                           const auto inst = random_instance(rng);
                           const auto r = verify_compacts_iso(inst.module, inst.action, o.tol, o.seed + i);
                           c.residual = std::max(c.residual, r.max_residual());
                           ok = ok && r.passed;
                         }
                         c.passed = ok && c.residual <= o.tol;
                         c.detail = std::to_string(o.instances) + " instances";
                       });
}

inline Check module_structure_on_spec(const Setting& s, const Options& o) {
  return detail::timed("module structure on the spec's actions",
                       "the unit module of every component satisfies both module identities", [&](Check& c) {
                         bool ok = true;
                         std::size_t checked = 0, skipped = 0;
                         for (const ModelPtr& m : {s.g, s.l})
                           for (const auto& comp : m->components()) {
                             if (comp.space()->total_dim() > o.max_spec_dim) {
                               ++skipped;
                               continue;
                             }
                             ++checked;
                             const auto e = unit_module(comp.action());
                             const auto r1 = verify_module_structure(e, comp.action(), o.tol, o.seed);
                             const auto r2 = verify_compacts_iso(e, comp.action(), o.tol, o.seed);
                             c.residual = std::max({c.residual, r1.max_residual(), r2.max_residual()});
                             ok = ok && r1.passed && r2.passed;
                           }
                         c.passed = ok && c.residual <= o.tol;
                         c.detail = std::to_string(checked) + " components";
                         if (skipped) c.detail += ", " + std::to_string(skipped) + " larger ones left to the random checks";
                       });
}

inline Report core_suite(const Setting& s, const Options& o) {
  Report r;
  r.checks.push_back(module_structure_random(o));
  r.checks.push_back(compacts_iso_random(o));
  r.checks.push_back(module_structure_on_spec(s, o));
  return r;
}

// ---------------------------------------------------------------- algebra

inline Check fiber_image_is_commutant(const Setting& s, const Options& o) {
  return detail::timed("fiber image equals the commutant",
                       "evaluation of the fixed-point algebra at a point is the commutant of the intertwiners",
                       [&](Check& c) {
                         bool ok = true;
                         std::size_t points = 0;
                         for (const ModelPtr& m : {s.g, s.l})
                           for (const auto& comp : m->components())
                             for (std::size_t x = 0; x < comp.grid().size(); ++x, ++points) {
                               const auto r = fiber_image(comp, x);
                               ok = ok && r.image_dim() == r.commutant_dim();
                               c.residual = std::max(c.residual, r.span_distance);
                             }
                         c.passed = ok && c.residual <= o.tol;
                         c.detail = std::to_string(points) + " points";
                       });
}

inline Check irreducibles_fill_fibers(const Setting& s, const Options&) {
  return detail::timed("irreducibles fill every fiber", "sum of rank times multiplicity equals the fiber dimension",
                       [&](Check& c) {
                         c.passed = true;
                         for (const auto& comp : s.g->components())
                           for (std::size_t x = 0; x < comp.grid().size(); ++x) {
                             Index total = 0;
                             for (const auto& d : irreducibles_at(*s.g, s.g->require(comp.id()), x))
                               total += d.rank * d.multiplicity;
                             const Index gap = std::abs(total - comp.space()->dim(x));
                             c.residual = std::max(c.residual, static_cast<double>(gap));
                             if (gap != 0) c.passed = false;
                           }
                       });
}

inline Check surjectivity_properties(const Options& o) {
  return detail::timed("surjectivity criterion", "a map onto a finite product of matrix algebras is onto iff it is "
                                                 "onto each factor and separates inequivalent factors",
                       [&](Check& c) {
                         const auto r = surjectivity_property_tests(o.seed);
                         c.passed = r.passed();
                         std::size_t bad = 0;
                         for (const auto& k : r.cases) bad += k.ok() ? 0 : 1;
                         c.residual = static_cast<double>(bad);
                         c.detail = std::to_string(r.cases.size()) + " cases";
                       });
}

inline Report algebra_suite(const Setting& s, const Options& o) {
  Report r;
  r.checks.push_back(fiber_image_is_commutant(s, o));
  r.checks.push_back(irreducibles_fill_fibers(s, o));
  r.checks.push_back(surjectivity_properties(o));
  return r;
}

// ---------------------------------------------------------------- ups

inline Check ups_axioms(const Setting& s, const Options& o) {
  return detail::timed("bimodule axioms", "the universal principal series is a full correspondence", [&](Check& c) {
    const auto& e = *s.ups;
    Rng rng(o.seed);
    for (int t = 0; t < 5; ++t) {
      const auto S = e.random(rng), T = e.random(rng);
      const auto a = AlgebraElement::random(s.g, rng);
      const auto b = AlgebraElement::random(s.l, rng);
      const double scale = std::max(1.0, e.norm(S) * e.norm(T) * std::max(a.norm(), b.norm()));
      const double r = std::max({(e.l_inner(S, e.left_act(a.adjoint(), T)) - e.l_inner(e.left_act(a, S), T)).norm(),
                                 (e.l_inner(S, T).adjoint() - e.l_inner(T, S)).norm(),
                                 (e.l_inner(S, e.right_act(T, b)) - e.l_inner(S, T) * b).norm()}) /
                       scale;
      c.residual = std::max({c.residual, r, e.equivariance_defect(e.left_act(a, S)),
                             e.equivariance_defect(e.right_act(S, b))});
    }
    bool full = true;
    for (const auto& comp : e.components()) full = full && comp.full();
    c.passed = full && c.residual <= o.tol;
    c.detail = std::to_string(e.size()) + " summands" + (full ? "" : ", not full");
  });
}

inline Check induce_is_representation(const Setting& s, const Options& o) {
  return detail::timed("induced families are representations", "Ind tau is a *-representation of the group algebra",
                       [&](Check& c) {
                         Rng rng(o.seed + 5);
                         for (int t = 0; t < 3; ++t) {
                           const auto tau = random_representation(s.l, rng);
                           const auto d = induce_data(*s.ups, tau);
                           const auto a = AlgebraElement::random(s.g, rng), b = AlgebraElement::random(s.g, rng);
                           const double scale = std::max(1.0, a.norm() * b.norm());
                           c.residual = std::max({c.residual, d.rep.invariance_residual(),
                                                  linalg::max_abs(d.rep.act(a * b) - d.rep.act(a) * d.rep.act(b)) / scale,
                                                  d.gram_residual / std::max(1.0, linalg::max_abs(d.gram))});
                         }
                         c.passed = c.residual <= o.tol;
                       });
}

inline Check stages_isometry(const Setting& s, const Options& o) {
  return detail::timed("induction in stages", "the two-step bimodule is isometrically the one-step bimodule",
                       [&](Check& c) {
                         const auto r = induction_in_stages(*s.ups, *s.stage->inner, *s.stage->glued, o.seed);
                         c.residual = r.residual();
                         c.passed = r.passed(o.tol);
                         c.detail = std::to_string(r.summands.size()) + " glued summands, levi " + s.stage->levi.str();
                       });
}

inline Check stages_functors(const Setting& s, const Options& o) {
  return detail::timed("induce after induce", "Ind(Ind tau) is equivalent to inducing tau through the glued parabolic",
                       [&](Check& c) {
                         Rng rng(o.seed + 9);
                         int bad = 0;
                         for (int t = 0; t < 5; ++t) {
                           const auto tau = random_representation(s.stage->j, rng);
                           const auto f = induction_functor_check(*s.ups, *s.stage->inner, *s.stage->glued, tau);
                           bad += f.equivalent() ? 0 : 1;
                         }
                         c.residual = bad;
                         c.passed = bad == 0;
                         c.detail = "5 random representations";
                       });
}

inline Report ups_suite(const Setting& s, const Options& o) {
  Report r;
  r.checks.push_back(ups_axioms(s, o));
  r.checks.push_back(induce_is_representation(s, o));
  if (s.stage) {
    r.checks.push_back(stages_isometry(s, o));
    r.checks.push_back(stages_functors(s, o));
  }
  const auto shape = minimal_parabolic_shape(s);
  std::string text = shape.minimal() ? "minimal" : "not minimal:";
  if (!shape.minimal())
    for (const auto& id : shape.offending()) text += " " + id;
  r.notes.push_back({"parabolic shape", text});
  return r;
}

// ---------------------------------------------------------------- restriction

/// A random pair for the adjunction. Independent random points rarely meet,
/// so every third pair has Ind tau added to pi and every third after that
/// has a constituent of Res pi added to tau.
inline std::pair<Representation, Representation> adjunction_pair(const AdjointModule& adj, Rng& rng, int trial) {
  auto tau = random_representation(adj.small(), rng);
  auto pi = random_representation(adj.big(), rng);
  if (trial % 3 == 1) {
    pi = Representation::direct_sum(pi, induce(adj.ups(), tau));
    pi = pi.rotated(rng.haar_unitary(pi.dim()));
  }
  if (trial % 3 == 2) {
    const auto parts = decompose(restrict(adj, pi));
    if (!parts.empty()) tau = Representation::direct_sum(tau, Representation::irreducible(adj.small(), parts.front().irrep));
  }
  return {std::move(tau), std::move(pi)};
}

inline Check norm_equivalence_check(const Setting& s, const Options& o) {
  return detail::timed("norm equivalence", "the averaged norm is squeezed between c ||S||^2 and ||S||^2",
                       [&](Check& c) {
                         const AdjointModule adj(s.ups);
                         Rng rng(o.seed);
                         double worst = 0.0;
                         std::string constants;
                         for (std::size_t i = 0; i < s.ups->size(); ++i) {
                           double constant = 0.0;
                           for (int t = 0; t < o.norm_samples; ++t) {
                             const auto S = s.ups->random_on(i, rng);
                             const auto r = norm_equivalence(adj, i, S[i]);
                             worst = std::min({worst, r.lower_slack, r.upper_slack});
                             constant = r.constant;
                           }
                           constants += (i ? ", " : "") + (*s.ups)[i].id() + " c=" + detail::fmt(constant);
                         }
                         c.residual = std::max(0.0, -worst);
                         c.passed = worst >= -1e-10;
                         c.detail = constants;
                       });
}

inline Check adjunction(const Setting& s, const Options& o) {
  return detail::timed("adjunction", "Hom(Ind tau, pi) = Hom(tau, Res pi) and Hom(pi, Ind tau) = Hom(Res pi, tau)",
                       [&](Check& c) {
                         const AdjointModule adj(s.ups);
                         Rng rng(o.seed);
                         int bad = 0;
                         Index nontrivial = 0;
                         for (int t = 0; t < o.adjunction_pairs; ++t) {
                           const auto [tau, pi] = adjunction_pair(adj, rng, t);
                           const auto r = adjunction_check(adj, tau, pi);
                           bad += r.holds() ? 0 : 1;
                           nontrivial += r.ind_to_pi + r.pi_to_ind;
                         }
                         c.residual = bad;
                         c.passed = bad == 0;
                         c.detail = std::to_string(o.adjunction_pairs) + " pairs, total Hom dimension " +
                                    std::to_string(nontrivial);
                       });
}

/// Res pi as a list of L-side irreducibles.
struct RestrictionListing {
  std::string descriptor;
  Index dim = 0;
  struct Entry {
    std::string irrep;
    Index rank = 0;
    Index multiplicity = 0;
  };
  std::vector<Entry> constituents;

  std::string str() const {
    if (constituents.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < constituents.size(); ++i) {
      const auto& e = constituents[i];
      s += (i ? " + " : "") + (e.multiplicity > 1 ? std::to_string(e.multiplicity) + "*" : std::string()) + e.irrep;
    }
    return s;
  }
};

inline RestrictionListing restriction_listing(const Setting& s, const std::string& descriptor) {
  const AdjointModule adj(s.ups);
  const auto res = restrict(adj, parse_representation(s.g, descriptor));
  RestrictionListing out;
  out.descriptor = descriptor;
  out.dim = res.dim();
  for (const auto& c : decompose(res)) out.constituents.push_back({c.irrep.name(), c.irrep.rank, c.multiplicity});
  return out;
}

inline Report restriction_suite(const Setting& s, const Options& o) {
  Report r;
  r.checks.push_back(norm_equivalence_check(s, o));
  r.checks.push_back(adjunction(s, o));
  for (const auto& q : s.spec.queries) {
    try {
      const auto l = restriction_listing(s, q.descriptor);
      r.notes.push_back({"Res " + q.name + " (" + q.descriptor + ")", l.str() + ", dimension " + std::to_string(l.dim)});
    } catch (const std::exception& e) {
      r.notes.push_back({"Res " + q.name + " (" + q.descriptor + ")", std::string("error: ") + e.what()});
    }
  }
  return r;
}

// ---------------------------------------------------------------- plancherel

inline Check projection_identities(const Setting& s, const Options& o) {
  return detail::timed("averaging projection", "Av is an idempotent, self-adjoint contraction for invariant weights",
                       [&](Check& c) {
                         Rng rng(o.seed);
                         for (const ModelPtr& m : {s.g, s.l})
                           for (const auto& comp : m->components()) {
                             const auto r = projection_properties(comp.action(), comp.weights(), rng);
                             c.residual = std::max({c.residual, r.idempotence, r.self_adjointness, r.contraction, r.range});
                           }
                         c.passed = c.residual <= std::min(o.tol, 1e-10);
                       });
}

/// Weights that differ along some orbit; nullopt when every orbit is a point.
inline std::optional<std::vector<double>> skewed_weights(const Component& comp) {
  const auto& act = comp.action();
  for (std::size_t k = 0; k < act.orbit_count(); ++k)
    if (act.orbit(k).size() > 1) {
      auto m = comp.weights();
      m[act.orbit(k).back()] *= 3.0;
      return m;
    }
  return std::nullopt;
}

inline Check projection_control(const Setting& s, const Options& o) {
  return detail::timed("non-invariant weights (negative control)",
                       "Av is not self-adjoint once the weights stop being invariant", [&](Check& c) {
                         Rng rng(o.seed + 3);
                         std::size_t tried = 0, broken = 0;
                         for (const auto& comp : s.g->components()) {
                           const auto m = skewed_weights(comp);
                           if (!m) continue;
                           ++tried;
                           const auto r = projection_properties(comp.action(), *m, rng);
                           if (r.self_adjointness > 1e-6) ++broken;
                           c.residual = std::max(c.residual, r.self_adjointness);
                         }
                         c.passed = broken == tried;
                         c.detail = tried == 0 ? "no component with a nontrivial orbit"
                                               : std::to_string(broken) + " of " + std::to_string(tried) +
                                                     " skewed components break self-adjointness";
                       });
}

inline Check wave_packet_pairing(const Setting& s, const Options& o) {
  return detail::timed("wave packet pairing", "<F, h> = <F, Av h> for invariant F, with no leakage across components",
                       [&](Check& c) {
                         Rng rng(o.seed + 7);
                         bool ok = true;
                         for (int t = 0; t < o.wave_packet_pairs; ++t) {
                           const auto f = averaging_projection(*s.g, random_fourier(*s.g, rng));
                           auto h = random_fourier(*s.g, rng);
                           const auto empty = static_cast<std::size_t>(t) % s.g->size();
                           if (s.g->size() > 1) h[empty] = OperatorField::zero(h[empty].source());
                           const auto r = wave_packet_pairing_check(*s.g, f, h);
                           c.residual = std::max({c.residual, r.difference, r.leakage});
                           ok = ok && r.holds(std::min(o.tol, 1e-10));
                         }
                         c.passed = ok;
                         c.detail = std::to_string(o.wave_packet_pairs) + " pairs";
                       });
}

inline Check inner_product_consistency(const Setting& s, const Options& o) {
  return detail::timed("averaged inner product as a wave packet",
                       "<conj S1, conj S2> equals the averaging projection of S1 S2^*", [&](Check& c) {
                         const AdjointModule adj(s.ups);
                         Rng rng(o.seed + 11);
                         bool ok = true;
                         for (std::size_t i = 0; i < s.ups->size(); ++i)
                           for (int t = 0; t < 3; ++t) {
                             const auto a = s.ups->random_on(i, rng), b = s.ups->random_on(i, rng);
                             const auto r = inner_product_wavepacket_consistency(adj, i, a[i], b[i]);
                             c.residual = std::max({c.residual, r.residual, r.other_norm});
                             ok = ok && r.holds(std::min(o.tol, 1e-10));
                           }
                         c.passed = ok;
                         c.detail = std::to_string(s.ups->size()) + " summands";
                       });
}

inline Report plancherel_suite(const Setting& s, const Options& o) {
  Report r;
  r.checks.push_back(projection_identities(s, o));
  r.checks.push_back(projection_control(s, o));
  r.checks.push_back(wave_packet_pairing(s, o));
  r.checks.push_back(inner_product_consistency(s, o));
  return r;
}

// ---------------------------------------------------------------- dispatch

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"core", "algebra", "ups", "restriction", "plancherel"};
  return names;
}

inline Report run(const Setting& s, const std::string& suite, const Options& o) {
  Report r;
  r.spec = s.spec.name;
  r.suite = suite;
  r.seed = o.seed;
  r.tol = o.tol;
  auto one = [&](const std::string& name) {
    if (name == "core") return core_suite(s, o);
    if (name == "algebra") return algebra_suite(s, o);
    if (name == "ups") return ups_suite(s, o);
    if (name == "restriction") return restriction_suite(s, o);
    if (name == "plancherel") return plancherel_suite(s, o);
    throw ValidationError("unknown suite '" + name + "'");
  };
  if (suite == "all")
    for (const auto& name : suite_names()) r.append(one(name));
  else
    r.append(one(suite));
  return r;
}

}  // namespace tdual::verify
