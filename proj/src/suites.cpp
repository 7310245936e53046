#include "bilab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <set>

#include "bilab/errors.hpp"
#include "bilab/formula.hpp"
#include "bilab/interp_sl2.hpp"
#include "bilab/parallel.hpp"
#include "bilab/sl3.hpp"

namespace bilab {

std::string_view status_name(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::Pass: return "pass";
    case SuiteStatus::Fail: return "fail";
    case SuiteStatus::Skipped: return "skipped";
  }
  return "?";
}

const std::vector<std::string>& suite_catalog() {
  static const std::vector<std::string> names = {
      "s-lemma",      "rt-sets",    "hdef",         "hdef-negative",   "u-def",       "v-def",
      "w-def",        "mult-formula", "gamma1-vhu", "theta-sl2",       "roundtrip",   "quotient-interp",
      "sl3-klemma",   "sl3-centralizer", "sl3-width", "sl3-theta",     "parser-roundtrip"};
  return names;
}

bool is_negative_control(std::string_view suite) { return suite == "hdef-negative"; }

bool fields_at_least_5(const ProductRing& ring) {
  for (const auto& c : ring.components()) {
    if (!c.is_field() || c.prime() < 5) return false;
  }
  return true;
}

namespace {

const std::set<std::string, std::less<>> kSl2Suites = {"hdef",       "u-def",     "v-def",    "w-def",
                                                        "mult-formula", "gamma1-vhu", "theta-sl2", "roundtrip"};

bool sl2_enumerable(const ProductRing& ring) {
  return std::pow(static_cast<double>(ring.cardinality()), 4) <= static_cast<double>(kEnumerationLimit);
}

double card_pow(const ProductRing& ring, int k) { return std::pow(static_cast<double>(ring.cardinality()), k); }

bool applicable_in_all(const ProductRing& ring, const std::string& s) {
  bool good = fields_at_least_5(ring);
  if (s == "s-lemma" || s == "rt-sets" || s == "quotient-interp" || s == "parser-roundtrip") return true;
  if (kSl2Suites.count(s)) return good && sl2_enumerable(ring);
  if (s == "hdef-negative") return !good && sl2_enumerable(ring);
  if (ring.num_components() != 1 || !good) return false;
  if (s == "sl3-klemma") return card_pow(ring, 8) <= kKlemmaLimit;
  if (s == "sl3-centralizer") return card_pow(ring, 9) <= kSl3EnumerationLimit;
  return s == "sl3-width" || s == "sl3-theta";
}

// Reason the suite does not apply to the ring, empty when it does.
std::string skip_reason(const ProductRing& ring, const std::string& s) {
  bool good = fields_at_least_5(ring);
  if (kSl2Suites.count(s) && !good) {
    return "needs every component to be a prime field of characteristic >= 5";
  }
  if (s == "hdef-negative" && good) return "ring has no truncated or small-characteristic component";
  if (s.rfind("sl3-", 0) == 0 && !good) return "needs every component to be a prime field of characteristic >= 5";
  return {};
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::vector<std::string> resolve_suites(const ProductRing& ring, const std::vector<std::string>& requested) {
  std::set<std::string> want;
  for (const auto& r : requested) {
    if (r == "all") {
      for (const auto& s : suite_catalog()) {
        if (applicable_in_all(ring, s)) want.insert(s);
      }
      continue;
    }
    const auto& cat = suite_catalog();
    if (std::find(cat.begin(), cat.end(), r) == cat.end()) throw ConfigError("unknown suite '" + r + "'");
    want.insert(r);
  }
  std::vector<std::string> out;
  for (const auto& s : suite_catalog()) {
    if (want.count(s)) out.push_back(s);
  }
  return out;
}

std::uint64_t suite_seed(std::uint64_t seed, std::string_view suite) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : suite) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ull;
  return splitmix(seed ^ splitmix(h));
}

namespace {

// Collects failures with the cap and a total count.
struct Recorder {
  SuiteReport& report;
  std::uint64_t failed = 0;

  void fail(std::string witness) {
    ++failed;
    if (report.failures.size() < kMaxFailures) report.failures.push_back(std::move(witness));
  }
  void note(std::string text) { report.notes.push_back(std::move(text)); }
};

// Runs check(item) over items on `jobs` workers. check returns a failure
// witness or nothing. Failures are merged in item order.
template <class T, class Fn>
void scan(const std::vector<T>& items, std::size_t jobs, Recorder& rec, Fn&& check) {
  std::size_t chunks = chunk_count(items.size(), jobs);
  std::vector<std::vector<std::string>> fails(chunks);
  std::vector<std::uint64_t> counts(chunks, 0);
  parallel_chunks(items.size(), jobs, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::optional<std::string> f;
      try {
        f = check(items[i]);
      } catch (const Error& e) {
        if constexpr (requires { to_string(items[i]); }) {
          f = to_string(items[i]) + ": " + e.what();
        } else {
          f = std::string(e.what());
        }
      }
      if (f) {
        ++counts[c];
        if (fails[c].size() < kMaxFailures) fails[c].push_back(std::move(*f));
      }
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    rec.failed += counts[c];
    for (auto& f : fails[c]) {
      if (rec.report.failures.size() < kMaxFailures) rec.report.failures.push_back(std::move(f));
    }
  }
}

template <class T>
std::string join(const std::vector<T>& xs, const std::string& sep, std::function<std::string(const T&)> fn) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += fn(xs[i]);
  }
  return out;
}

void record_sets(Recorder& rec, const DefinabilityReport& r) {
  rec.note(r.name + ": computed " + std::to_string(r.computed_size) + ", oracle " + std::to_string(r.oracle_size));
  if (r.equal) return;
  if (r.counterexamples.empty()) rec.fail(r.name + " differs from its oracle");
  for (const auto& g : r.counterexamples) rec.fail(to_string(g));
}

std::uint64_t sl2_order(const ProductRing& ring, std::size_t central) {
  double n = 1;
  for (const auto& c : ring.components()) {
    double p = c.prime(), m = c.modulus();
    n *= m * m * m * (1 - 1 / (p * p));
  }
  return static_cast<std::uint64_t>(std::llround(n)) / central;
}

// State shared by the suites of one run.
class Shared {
 public:
  Shared(const SuiteConfig& cfg, ProductRing ring) : cfg_(cfg), ring_(std::move(ring)) {}

  const SuiteConfig& config() const { return cfg_; }
  const ProductRing& ring() const { return ring_; }
  std::size_t jobs() const { return jobs_; }
  void set_jobs(std::size_t j) { jobs_ = j; }

  const GroupCtx& ctx() {
    std::call_once(ctx_once_, [&] { ctx_ = std::make_unique<GroupCtx>(ring_, cfg_.quotient); });
    return *ctx_;
  }
  const Sl2Interp& interp() {
    std::call_once(interp_once_, [&] {
      interp_ = std::make_unique<Sl2Interp>(ctx(), Sl2Interp::Options{cfg_.corrupt_star});
    });
    return *interp_;
  }
  const DefinableSets& sets() {
    std::call_once(sets_once_, [&] { sets_ = std::make_unique<DefinableSets>(interp(), jobs_); });
    return *sets_;
  }

  // Exhaustive carrier when |Gamma| <= 1e5, otherwise a seeded sample.
  std::vector<GroupElem> theta_domain(std::mt19937_64& rng, bool& exhaustive) {
    std::uint64_t order = sl2_order(ring_, ctx().central().size());
    exhaustive = order <= kExhaustiveGroupLimit;
    if (exhaustive) return sets().carrier().elements();
    std::vector<GroupElem> out;
    for (std::size_t i = 0; i < cfg_.sample_size; ++i) out.push_back(ctx().random_element(rng));
    return out;
  }

 private:
  const SuiteConfig& cfg_;
  ProductRing ring_;
  std::size_t jobs_ = 1;
  std::once_flag ctx_once_, interp_once_, sets_once_;
  std::unique_ptr<GroupCtx> ctx_;
  std::unique_ptr<Sl2Interp> interp_;
  std::unique_ptr<DefinableSets> sets_;
};

std::vector<RingElem> ring_domain(const ProductRing& ring, std::size_t sample, std::mt19937_64& rng) {
  if (ring.cardinality() <= kExhaustiveRingLimit) return ring.elements();
  std::uniform_int_distribution<std::uint64_t> dist(0, ring.cardinality() - 1);
  std::vector<RingElem> out;
  for (std::size_t i = 0; i < sample; ++i) out.push_back(ring.element_at(dist(rng)));
  return out;
}

template <class T>
std::vector<T> sample_of(const std::vector<T>& xs, std::size_t k, std::mt19937_64& rng) {
  if (xs.size() <= k) return xs;
  std::vector<T> out;
  std::uniform_int_distribution<std::size_t> dist(0, xs.size() - 1);
  for (std::size_t i = 0; i < k; ++i) out.push_back(xs[dist(rng)]);
  return out;
}

// Filter evaluation on a sample of candidates must agree with membership in
// the image-built set.
void cross_check(Shared& sh, Recorder& rec, const std::string& name, const char* formula,
                 const std::vector<GroupElem>& image, const std::vector<GroupElem>& candidates,
                 const fo::SortEnv& sorts) {
  const Sl2Interp& in = sh.interp();
  std::vector<GroupElem> filtered = fo::define_set(in.ctx(), fo::parse(formula), "g", &candidates, sorts, in.params(),
                                                   fo::Strategy::Filter, sh.jobs());
  std::set<GroupElem> img(image.begin(), image.end());
  std::set<GroupElem> flt(filtered.begin(), filtered.end());
  std::size_t bad = 0;
  for (const auto& g : std::set<GroupElem>(candidates.begin(), candidates.end())) {
    if (img.count(g) != flt.count(g)) {
      ++bad;
      rec.fail("image/filter disagree on " + to_string(g));
    }
  }
  rec.note(name + " image/filter cross-check on " + std::to_string(candidates.size()) + " candidates: " +
           (bad ? std::to_string(bad) + " disagreements" : std::string("agree")));
}

// ---------------------------------------------------------------- ring level

void suite_s_lemma(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const ProductRing& R = sh.ring();
  SquareDiffSolver solver(R);
  const SSet& S = solver.s_set();
  if (!S.contains(R.zero()) || !S.contains(R.one())) rec.fail("S lacks the global 0 or 1");
  auto dom = ring_domain(R, sh.config().sample_size, rng);
  scan(dom, sh.jobs(), rec, [&](const RingElem& a) -> std::optional<std::string> {
    SquareDiffWitness w;
    try {
      w = solver.decompose(a);
    } catch (const DecompositionError&) {
      return to_string(a) + ": no witness";
    }
    if (!R.is_unit(w.xi) || !R.is_unit(w.eta) || !S.contains(w.s)) return to_string(a) + ": bad witness";
    for (std::size_t c = 0; c < R.num_components(); ++c) {
      std::uint64_t m = R.component(c).modulus();
      std::uint64_t v = (w.xi[c] * std::uint64_t{w.xi[c]} + (m - w.eta[c] * std::uint64_t{w.eta[c]} % m) + w.s[c]) % m;
      if (v != a[c]) return to_string(a) + ": witness does not recombine";
    }
    return std::nullopt;
  });
  rec.report.checked = dom.size();
  rec.note("|S| = " + std::to_string(S.size()) + ": " +
           join<RingElem>(S.elements, " ", [](const RingElem& e) { return to_string(e); }));
}

void suite_rt_sets(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const ProductRing& R = sh.ring();
  const std::vector<std::vector<std::int64_t>> families = {{0}, {1}, {0, 1}, {0, -1}, {-1, 0, 1}, {0, 1, 2}, {1, 3}};
  auto residue = [](std::int64_t t, std::uint32_t m) {
    std::int64_t r = t % static_cast<std::int64_t>(m);
    return static_cast<std::uint32_t>(r < 0 ? r + m : r);
  };
  // Pairwise differences must be units in every component; otherwise the
  // polynomial test also accepts zero divisors outside T.
  std::vector<std::vector<std::int64_t>> used;
  for (const auto& T : families) {
    bool ok = true;
    for (const auto& c : R.components()) {
      for (std::size_t i = 0; i < T.size(); ++i) {
        for (std::size_t j = i + 1; j < T.size(); ++j) {
          if (!c.is_unit(residue(T[i] - T[j], c.modulus()))) ok = false;
        }
      }
    }
    if (ok) used.push_back(T);
  }
  auto dom = ring_domain(R, sh.config().sample_size, rng);
  std::uint64_t checked = 0;
  for (const auto& T : used) {
    scan(dom, sh.jobs(), rec, [&](const RingElem& r) -> std::optional<std::string> {
      bool comp = true;
      for (std::size_t c = 0; c < R.num_components(); ++c) {
        std::uint32_t m = R.component(c).modulus();
        bool hit = false;
        for (auto t : T) hit = hit || residue(t, m) == r[c];
        comp = comp && hit;
      }
      if (comp == rt_member(R, r, T)) return std::nullopt;
      return "r=" + to_string(r) + " T={" +
             join<std::int64_t>(T, ",", [](const std::int64_t& t) { return std::to_string(t); }) + "}";
    });
    checked += dom.size();
  }
  rec.report.checked = checked;
  rec.note(std::to_string(used.size()) + " T-families with unit differences");
}

// ---------------------------------------------------------------- SL2 suites

void suite_hdef(Shared& sh, Recorder& rec, std::mt19937_64&) {
  const DefinableSets& D = sh.sets();
  const Sl2Interp& in = sh.interp();
  record_sets(rec, compare_sets("H", D.H(), in.h_oracle()));
  const auto& G = D.carrier().elements();
  std::vector<GroupElem> filtered =
      fo::define_set(in.ctx(), fo::parse(formulas::kH), "g", &G, {}, in.params(), fo::Strategy::Filter, sh.jobs());
  if (filtered != D.H()) rec.fail("formula route differs from the kernel scan");
  rec.report.checked = G.size();
}

void suite_hdef_negative(Shared& sh, Recorder& rec, std::mt19937_64&) {
  const GroupCtx& ctx = sh.ctx();
  GroupCarrier carrier(ctx);
  std::vector<GroupElem> c = carrier.centralizer(ctx.h_tau());
  std::vector<GroupElem> h;
  for (const auto& l : ctx.ring().units()) h.push_back(ctx.make_h(l));
  std::sort(h.begin(), h.end());
  h.erase(std::unique(h.begin(), h.end()), h.end());
  bool contains = std::includes(c.begin(), c.end(), h.begin(), h.end());
  rec.report.checked = carrier.size();
  rec.note("C(h(tau)) has " + std::to_string(c.size()) + " elements, h(R*) has " + std::to_string(h.size()));
  if (!contains) rec.note("h(R*) is not contained in the centralizer");
  if (contains && c.size() > h.size()) {
    std::vector<GroupElem> extra;
    std::set_difference(c.begin(), c.end(), h.begin(), h.end(), std::back_inserter(extra));
    rec.note("strict containment detected; first extra element " + to_string(extra.front()));
  } else {
    rec.fail("centralizer of h(tau) " + to_string(ctx.h_tau()) + " equals h(R*)");
  }
}

void suite_u_def(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const DefinableSets& D = sh.sets();
  const Sl2Interp& in = sh.interp();
  record_sets(rec, compare_sets("U", D.U(), in.u_oracle()));
  auto cand = sample_of(D.carrier().elements(), 256, rng);
  for (const auto& g : sample_of(in.u_oracle(), 32, rng)) cand.push_back(g);
  cross_check(sh, rec, "U", formulas::kU, D.U(), cand, {{"H", D.H()}, {"S", D.named("S")}});
  rec.report.checked = D.carrier().size();
}

void suite_v_def(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const DefinableSets& D = sh.sets();
  const Sl2Interp& in = sh.interp();
  record_sets(rec, compare_sets("V", D.V(), in.v_oracle()));
  auto cand = sample_of(D.carrier().elements(), 1024, rng);
  for (const auto& g : in.v_oracle()) cand.push_back(g);
  cross_check(sh, rec, "V", formulas::kV, D.V(), cand, {{"U", D.U()}});
  rec.report.checked = D.carrier().size();
}

void suite_w_def(Shared& sh, Recorder& rec, std::mt19937_64&) {
  const DefinableSets& D = sh.sets();
  const Sl2Interp& in = sh.interp();
  record_sets(rec, compare_sets("U01", D.U01(), in.u01_oracle()));
  record_sets(rec, compare_sets("W", D.W(), in.w_oracle()));
  cross_check(sh, rec, "W", formulas::kW, D.W(), D.carrier().elements(), {{"U01", D.U01()}});
  rec.report.checked = D.carrier().size();
}

std::string triple_string(const fo::Tuple& t) {
  return to_string(t[0]) + " * " + to_string(t[1]) + " = " + to_string(t[2]);
}

void suite_mult_formula(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const DefinableSets& D = sh.sets();
  const Sl2Interp& in = sh.interp();
  const ProductRing& R = sh.ring();
  std::vector<fo::Tuple> graph;
  for (const auto& a : R.elements()) {
    for (const auto& b : R.elements()) graph.push_back({in.encode(b), in.encode(a), in.encode(R.mul(b, a))});
  }
  std::sort(graph.begin(), graph.end());
  const auto& P = D.P();
  std::vector<fo::Tuple> extra, missing;
  std::set_difference(P.begin(), P.end(), graph.begin(), graph.end(), std::back_inserter(extra));
  std::set_difference(graph.begin(), graph.end(), P.begin(), P.end(), std::back_inserter(missing));
  for (const auto& t : extra) rec.fail("P holds off the graph: " + triple_string(t));
  for (const auto& t : missing) rec.fail("P misses " + triple_string(t));
  rec.note("P: " + std::to_string(P.size()) + " triples, multiplication graph " + std::to_string(graph.size()));

  // The constructive star product agrees with the graph.
  scan(graph, sh.jobs(), rec, [&](const fo::Tuple& t) -> std::optional<std::string> {
    if (in.star_mul(t[0], t[1]) == t[2]) return std::nullopt;
    return "star product wrong: " + triple_string(t);
  });

  // Per-triple evaluation of the formula on sampled triples.
  fo::Formula pf = fo::parse(formulas::p_formula(in.s_set().size()));
  fo::SortEnv sorts{{"H", D.H()}};
  fo::ParamEnv params = in.params();
  std::vector<fo::Tuple> probe = sample_of(graph, 24, rng);
  const auto& U = in.u_oracle();
  std::uniform_int_distribution<std::size_t> pick(0, U.size() - 1);
  for (int i = 0; i < 24; ++i) probe.push_back({U[pick(rng)], U[pick(rng)], U[pick(rng)]});
  std::size_t bad = 0;
  for (const auto& t : probe) {
    bool holds = fo::eval(in.ctx(), pf, sorts, params, {{"y1", t[0]}, {"y2", t[1]}, {"y3", t[2]}});
    if (holds != std::binary_search(P.begin(), P.end(), t)) {
      ++bad;
      rec.fail("image/filter disagree on " + triple_string(t));
    }
  }
  rec.note("P image/filter cross-check on " + std::to_string(probe.size()) + " triples: " +
           (bad ? std::to_string(bad) + " disagreements" : std::string("agree")));
  rec.report.checked = graph.size();
}

void suite_gamma1_vhu(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const DefinableSets& D = sh.sets();
  const Sl2Interp& in = sh.interp();
  const GroupCtx& ctx = in.ctx();
  const auto& G = D.carrier().elements();
  std::vector<GroupElem> oracle;
  for (const auto& g : G) {
    if (ctx.ring().is_unit(g.rep().a)) oracle.push_back(g);
  }
  record_sets(rec, compare_sets("Gamma1", D.Gamma1(), oracle));
  std::size_t vhu = in.v_oracle().size() * in.h_oracle().size() * in.u_oracle().size();
  if (D.Gamma1().size() != vhu) {
    rec.fail("|Gamma1| = " + std::to_string(D.Gamma1().size()) + " but |V||H||U| = " + std::to_string(vhu));
  }
  rec.note("|V||H||U| = " + std::to_string(vhu));

  TildeChecker tilde(in);
  std::mutex lit_mutex;
  std::uint64_t literal_bad = 0;
  scan(oracle, sh.jobs(), rec, [&](const GroupElem& g) -> std::optional<std::string> {
    VHU p = in.vhu_decompose(g);
    if (!in.in_v(p.v) || !in.in_h(p.h) || !in.in_u(p.u)) return to_string(g) + ": factor outside V, H or U";
    if (ctx.mul(ctx.mul(p.v, p.h), p.u) != g) return to_string(g) + ": VHU product differs";
    if (tilde.v_part(g) != std::vector<GroupElem>{p.v}) return to_string(g) + ": V n gUH does not pick v~";
    if (tilde.u_part(g) != std::vector<GroupElem>{p.u}) return to_string(g) + ": U n HVg does not pick u~";
    if (tilde.h_part(g) != std::vector<GroupElem>{p.h}) return to_string(g) + ": H n VgU does not pick h~";
    if (tilde.v_part_literal(g) != std::vector<GroupElem>{p.v}) {
      std::lock_guard<std::mutex> lock(lit_mutex);
      ++literal_bad;
    }
    return std::nullopt;
  });
  rec.note("V n HUg differs from {v~(g)} on " + std::to_string(literal_bad) + " of " + std::to_string(oracle.size()) +
           " members; V n gUH is used");

  auto cand = sample_of(G, 48, rng);
  for (const auto& g : sample_of(oracle, 16, rng)) cand.push_back(g);
  cross_check(sh, rec, "Gamma1", formulas::kGamma1, D.Gamma1(), cand,
              {{"V", D.V()}, {"H", D.H()}, {"U", D.U()}});
  rec.report.checked = G.size();
}

// theta images agree when their decoded matrices agree modulo the centre.
bool same_mod_centre(const Sl2Interp& in, const MatU& x, const MatU& y) {
  return quotient_equiv(in.ring(), in.matu_decode(x), in.matu_decode(y), in.ctx().quotient());
}

void suite_theta(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const Sl2Interp& in = sh.interp();
  bool exhaustive = false;
  auto dom = sh.theta_domain(rng, exhaustive);
  scan(dom, sh.jobs(), rec, [&](const GroupElem& g) -> std::optional<std::string> {
    MatU direct = in.theta_direct(g);
    if (!in.represents(direct, g)) return to_string(g) + ": direct image decodes elsewhere";
    if (!same_mod_centre(in, in.theta_definable(g), direct)) return to_string(g);
    return std::nullopt;
  });
  std::vector<GroupElem> special = in.u_oracle();
  for (const auto& part : {in.v_oracle(), in.h_oracle(), in.w_oracle()}) {
    special.insert(special.end(), part.begin(), part.end());
  }
  scan(special, sh.jobs(), rec, [&](const GroupElem& g) -> std::optional<std::string> {
    if (same_mod_centre(in, in.theta_restricted(g), in.theta_direct(g))) return std::nullopt;
    return to_string(g) + ": restricted theta differs";
  });
  rec.report.checked = dom.size();
  rec.note(std::string(exhaustive ? "exhaustive over " : "sampled ") + std::to_string(dom.size()) +
           " elements, plus " + std::to_string(special.size()) + " in U, V, H, W");
}

void suite_roundtrip(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const Sl2Interp& in = sh.interp();
  const ProductRing& R = sh.ring();
  const GroupCtx& ctx = in.ctx();
  auto rdom = ring_domain(R, sh.config().sample_size, rng);
  scan(rdom, sh.jobs(), rec, [&](const RingElem& r) -> std::optional<std::string> {
    if (in.roundtrip_ring(r) == r) return std::nullopt;
    return to_string(r) + ": ring round trip moves it";
  });
  bool exhaustive = false;
  auto gdom = sh.theta_domain(rng, exhaustive);
  scan(gdom, sh.jobs(), rec, [&](const GroupElem& g) -> std::optional<std::string> {
    if (in.roundtrip_group(g) == g) return std::nullopt;
    return to_string(g);
  });

  // (U, *, star) satisfies the commutative ring axioms with zero u(0) and one u.
  const auto& U = in.u_oracle();
  std::vector<std::array<std::size_t, 3>> triples;
  if (U.size() <= 50) {
    for (std::size_t a = 0; a < U.size(); ++a) {
      for (std::size_t b = 0; b < U.size(); ++b) {
        for (std::size_t c = 0; c < U.size(); ++c) triples.push_back({a, b, c});
      }
    }
  } else {
    std::uniform_int_distribution<std::size_t> d(0, U.size() - 1);
    for (std::size_t i = 0; i < sh.config().sample_size; ++i) triples.push_back({d(rng), d(rng), d(rng)});
  }
  const GroupElem zero = in.encode(R.zero()), one = ctx.u();
  scan(triples, sh.jobs(), rec, [&](const std::array<std::size_t, 3>& t) -> std::optional<std::string> {
    const GroupElem &x = U[t[0]], &y = U[t[1]], &z = U[t[2]];
    auto add = [&](const GroupElem& p, const GroupElem& q) { return ctx.mul(p, q); };
    auto mul = [&](const GroupElem& p, const GroupElem& q) { return in.star_mul(p, q); };
    std::string at = to_string(x) + ", " + to_string(y) + ", " + to_string(z);
    if (add(add(x, y), z) != add(x, add(y, z)) || add(x, y) != add(y, x)) return "addition axioms fail at " + at;
    if (mul(mul(x, y), z) != mul(x, mul(y, z)) || mul(x, y) != mul(y, x)) return "product axioms fail at " + at;
    if (mul(x, add(y, z)) != add(mul(x, y), mul(x, z))) return "distributivity fails at " + at;
    if (add(x, zero) != x || mul(x, one) != x || mul(x, zero) != zero) return "identities fail at " + at;
    return std::nullopt;
  });
  rec.report.checked = rdom.size() + gdom.size() + triples.size();
  rec.note("ring " + std::to_string(rdom.size()) + ", group " + std::to_string(gdom.size()) +
           (exhaustive ? " (exhaustive)" : " (sampled)") + ", ring axioms on " + std::to_string(triples.size()) +
           " triples of U");
}

void suite_quotient_interp(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const ProductRing& R = sh.ring();
  GroupCtx plain(R, QuotientKind::Trivial);
  std::vector<GroupElem> mats;
  bool exhaustive = sl2_enumerable(R) && sl2_order(R, 1) <= kExhaustiveGroupLimit;
  if (exhaustive) {
    mats = plain.enumerate();
  } else {
    for (std::size_t i = 0; i < std::min<std::size_t>(sh.config().sample_size, 2000); ++i) {
      mats.push_back(plain.random_element(rng));
    }
  }
  // Scalars with lambda^2 = 1, found by scanning R; +-1 for PlusMinusOne.
  std::vector<RingElem> squares_one;
  for (const auto& l : R.elements()) {
    if (R.mul(l, l) == R.one()) squares_one.push_back(l);
  }
  std::set<RingElem> pm{R.one(), R.neg(R.one())};
  std::uint64_t checked = 0;
  for (QuotientKind q : {QuotientKind::PlusMinusOne, QuotientKind::FullCentre}) {
    std::size_t expected = q == QuotientKind::PlusMinusOne ? pm.size() : squares_one.size();
    GroupCtx qctx(R, q);
    std::map<Mat2, std::vector<Mat2>> classes;
    for (const auto& a : mats) {
      if (exhaustive) {
        classes[qctx.canonical(a.rep())].push_back(a.rep());
      } else {
        auto& cls = classes[qctx.canonical(a.rep())];
        for (const auto& l : squares_one) {
          if (q == QuotientKind::PlusMinusOne && !pm.count(l)) continue;
          Mat2 b = mat_scale(R, l, a.rep());
          if (qctx.canonical(b) == qctx.canonical(a.rep()) &&
              std::find(cls.begin(), cls.end(), b) == cls.end()) {
            cls.push_back(b);
          }
        }
      }
    }
    std::set<std::size_t> sizes;
    for (const auto& [rep, cls] : classes) {
      sizes.insert(cls.size());
      if (cls.size() != expected) rec.fail(std::string(quotient_name(q)) + " class of size " +
                                           std::to_string(cls.size()) + " at " + to_string(rep));
      for (const auto& b : cls) {
        if (!quotient_equiv(R, cls.front(), b, q)) rec.fail("quotient_equiv rejects a class member of " + to_string(rep));
      }
      Mat2 off = mat_mul(R, cls.front(), plain.make_u(R.one()).rep());
      if (quotient_equiv(R, cls.front(), off, q)) rec.fail("quotient_equiv accepts A*u for " + to_string(rep));
      checked += cls.size();
    }
    std::set<GroupElem> us;
    for (const auto& r : R.elements()) us.insert(qctx.make_u(r));
    if (us.size() != R.cardinality()) rec.fail(std::string("u is not injective into ") + std::string(quotient_name(q)));
    rec.note(std::string(quotient_name(q)) + ": " + std::to_string(classes.size()) + " classes, sizes {" +
             join<std::size_t>(std::vector<std::size_t>(sizes.begin(), sizes.end()), ",",
                               [](const std::size_t& s) { return std::to_string(s); }) +
             "}, expected " + std::to_string(expected));
  }
  rec.report.checked = checked;
}

// ---------------------------------------------------------------- SL3 suites

void suite_sl3_klemma(Shared& sh, Recorder& rec, std::mt19937_64&) {
  Sl3Ctx ctx(sh.ring());
  Sl3Report rep = verify_klemma(ctx, Root::A1);
  rec.note("product set " + std::to_string(rep.computed_size) + ", K_a1 " + std::to_string(rep.oracle_size));
  for (const auto& g : rep.counterexamples) rec.fail(to_string(g));
  if (!rep.equal && rep.counterexamples.empty()) rec.fail("product set differs from K_a1");
  const ProductRing& R = sh.ring();
  Mat3 w = ctx.phi(Root::A1, Mat2{R.zero(), R.one(), R.neg(R.one()), R.zero()});
  auto wit = klemma_witness(ctx, Root::A1, w);
  if (!wit) {
    rec.fail("no alternating product reaches " + to_string(w));
  } else {
    std::vector<RingElem> params(wit->begin(), wit->end());
    rec.note("phi_a1(w) = product with parameters " +
             join<RingElem>(params, " ", [](const RingElem& e) { return to_string(e); }));
  }
  rec.report.checked = static_cast<std::uint64_t>(card_pow(R, 8));
}

void suite_sl3_centralizer(Shared& sh, Recorder& rec, std::mt19937_64&) {
  Sl3Ctx ctx(sh.ring());
  Sl3Carrier group(ctx, ctx.enumerate());
  Sl3Report rep = verify_centralizer_identity(ctx, group, Root::A1);
  rec.note("|C(x_a1(1))| = " + std::to_string(rep.auxiliary_size) + ", |Z(C)| = " + std::to_string(rep.computed_size) +
           ", |U_a1 Z| = " + std::to_string(rep.oracle_size));
  for (const auto& g : rep.counterexamples) rec.fail(to_string(g));
  if (!rep.equal && rep.counterexamples.empty()) rec.fail("Z(C) differs from U_a1 Z");
  auto z = centre_by_scan(ctx, group);
  auto zo = centre_oracle(ctx);
  if (z != zo) rec.fail("centre scan finds " + std::to_string(z.size()) + " elements, scalars give " +
                        std::to_string(zo.size()));
  rec.note("|Z(SL3)| = " + std::to_string(z.size()));
  rec.report.checked = group.size();
}

void suite_sl3_width(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  Sl3Ctx ctx(sh.ring());
  std::vector<Mat3> dom;
  for (std::size_t i = 0; i < sh.config().sample_size; ++i) dom.push_back(ctx.random_element(rng));
  std::vector<std::size_t> widths(dom.size(), 0);
  std::vector<std::size_t> idx(dom.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  scan(idx, sh.jobs(), rec, [&](const std::size_t& i) -> std::optional<std::string> {
    const Mat3& g = dom[i];
    WidthDecomposition d = width_decompose(ctx, g);
    widths[i] = d.factors.size();
    Mat3 m = ctx.identity();
    for (const auto& f : d.factors) m = ctx.mul(m, ctx.x_root(f.root, f.param));
    if (m != g) return to_string(g) + ": reassembly differs";
    if (d.factors.size() > kWidthBound) return to_string(g) + ": width " + std::to_string(d.factors.size());
    return std::nullopt;
  });
  std::size_t mx = widths.empty() ? 0 : *std::max_element(widths.begin(), widths.end());
  rec.note("observed maximum width " + std::to_string(mx) + " (bound " + std::to_string(kWidthBound) + ")");
  rec.report.checked = dom.size();
}

void suite_sl3_theta(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  Sl3Ctx ctx(sh.ring());
  Sl3Theta theta(ctx, Root::A1);
  std::vector<Mat3> dom;
  std::size_t n = std::min<std::size_t>(sh.config().sample_size, 1000);
  for (std::size_t i = 0; i < n; ++i) dom.push_back(ctx.random_element(rng));
  scan(dom, sh.jobs(), rec, [&](const Mat3& g) -> std::optional<std::string> {
    if (theta.definable(g) == theta.direct(g)) return std::nullopt;
    return to_string(g);
  });
  std::vector<std::pair<Root, RingElem>> roots;
  for (Root b : kRoots) {
    for (const auto& r : ctx.ring().elements()) roots.push_back({b, r});
  }
  scan(roots, sh.jobs(), rec, [&](const std::pair<Root, RingElem>& p) -> std::optional<std::string> {
    if (theta.restricted(p.first, p.second) == theta.direct(ctx.x_root(p.first, p.second))) return std::nullopt;
    return "restricted theta differs at x_" + std::string(root_name(p.first)) + "(" + to_string(p.second) + ")";
  });
  for (int i = 0; i < 16; ++i) {
    InterpMat3 a = theta.direct(ctx.random_element(rng)), b = theta.direct(ctx.random_element(rng)),
               c = theta.direct(ctx.random_element(rng));
    if (theta.imul(theta.imul(a, b), c) != theta.imul(a, theta.imul(b, c))) {
      rec.fail("interpreted matrix product is not associative");
    }
  }
  std::string signs;
  for (Root b : kRoots) signs += std::string(" ") + std::string(root_name(b)) + (theta.sign(b) > 0 ? ":+" : ":-");
  rec.note("root conjugation signs" + signs);
  rec.report.checked = dom.size();
}

// ---------------------------------------------------------------- formulas

void suite_parser(Shared& sh, Recorder& rec, std::mt19937_64& rng) {
  const std::size_t n = sh.config().sample_size;
  std::size_t bad_syntax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    fo::Formula f = fo::random_syntax(rng, 4);
    std::string text = fo::print(f);
    try {
      if (fo::parse(text) != f) {
        ++bad_syntax;
        rec.fail("round trip changes " + text);
      }
    } catch (const ParseError& e) {
      ++bad_syntax;
      rec.fail(text + ": " + e.what());
    }
  }
  GroupCtx ctx(parse_ring_descriptor("5"), QuotientKind::Trivial);
  auto G = ctx.enumerate();
  fo::SortEnv sorts;
  std::vector<GroupElem> h, u, w{ctx.identity(), ctx.w()};
  for (const auto& l : ctx.ring().units()) h.push_back(ctx.make_h(l));
  for (const auto& r : ctx.ring().elements()) u.push_back(ctx.make_u(r));
  sorts["H"] = h;
  sorts["U"] = u;
  sorts["W"] = w;
  fo::ParamEnv params{{"u", ctx.u()}, {"v", ctx.v()}, {"h", ctx.h_tau()}, {"w", ctx.w()}};
  fo::Vocabulary vocab{{"g"}, {"x", "y", "z"}, {"u", "v", "h", "w"}, {"H", "U", "W"}};
  std::uniform_int_distribution<std::size_t> pick(0, G.size() - 1);
  std::size_t bad_eval = 0;
  for (std::size_t i = 0; i < n; ++i) {
    fo::Formula f = fo::random_formula(rng, vocab, 4);
    fo::Assignment env{{"g", G[pick(rng)]}};
    if (fo::eval(ctx, f, sorts, params, env) != fo::reference_eval(ctx, f, sorts, params, env)) {
      ++bad_eval;
      rec.fail("evaluators disagree on " + fo::print(f) + " at g = " + to_string(env["g"]));
    }
  }
  rec.note(std::to_string(n) + " syntax round trips (" + std::to_string(bad_syntax) + " bad), " + std::to_string(n) +
           " evaluator comparisons over SL2(5) (" + std::to_string(bad_eval) + " bad)");
  rec.report.checked = 2 * n;
}

using SuiteFn = void (*)(Shared&, Recorder&, std::mt19937_64&);

SuiteFn suite_fn(const std::string& name) {
  static const std::map<std::string, SuiteFn, std::less<>> table = {
      {"s-lemma", suite_s_lemma},
      {"rt-sets", suite_rt_sets},
      {"hdef", suite_hdef},
      {"hdef-negative", suite_hdef_negative},
      {"u-def", suite_u_def},
      {"v-def", suite_v_def},
      {"w-def", suite_w_def},
      {"mult-formula", suite_mult_formula},
      {"gamma1-vhu", suite_gamma1_vhu},
      {"theta-sl2", suite_theta},
      {"roundtrip", suite_roundtrip},
      {"quotient-interp", suite_quotient_interp},
      {"sl3-klemma", suite_sl3_klemma},
      {"sl3-centralizer", suite_sl3_centralizer},
      {"sl3-width", suite_sl3_width},
      {"sl3-theta", suite_sl3_theta},
      {"parser-roundtrip", suite_parser},
  };
  return table.at(name);
}

SuiteReport run_one(Shared& sh, const std::string& name) {
  SuiteReport r;
  r.suite = name;
  r.ring = sh.ring().descriptor();
  r.quotient = std::string(quotient_name(sh.config().quotient));
  r.expected_negative = is_negative_control(name);
  auto t0 = std::chrono::steady_clock::now();
  std::string reason = skip_reason(sh.ring(), name);
  if (!reason.empty()) {
    r.status = SuiteStatus::Skipped;
    r.skip_reason = reason;
    return r;
  }
  Recorder rec{r};
  std::mt19937_64 rng(suite_seed(sh.config().seed, name));
  try {
    suite_fn(name)(sh, rec, rng);
  } catch (const TooLargeError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    rec.fail(std::string("error: ") + e.what());
  }
  if (rec.failed > r.failures.size()) rec.note(std::to_string(rec.failed) + " failures in total");
  r.status = r.failures.empty() ? SuiteStatus::Pass : SuiteStatus::Fail;
  if (sh.config().timing) {
    r.elapsed_ms = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
  }
  return r;
}

}  // namespace

std::vector<SuiteReport> run(const SuiteConfig& config) {
  if (config.sample_size < 1) throw ConfigError("sample size must be at least 1");
  if (config.jobs < 1) throw ConfigError("jobs must be at least 1");
  Shared sh(config, parse_ring_descriptor(config.ring));
  std::vector<std::string> names = resolve_suites(sh.ring(), config.suites);
  std::vector<SuiteReport> reports(names.size());
  std::size_t outer = chunk_count(names.size(), config.jobs);
  sh.set_jobs(std::max<std::size_t>(1, config.jobs / std::max<std::size_t>(1, names.size())));
  if (names.size() == 1) sh.set_jobs(config.jobs);
  parallel_chunks(names.size(), outer, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) reports[i] = run_one(sh, names[i]);
  });
  return reports;
}

}  // namespace bilab
