#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sparsecut/detail/cut_enumeration.hpp"
#include "sparsecut/errors.hpp"
#include "sparsecut/instances.hpp"
#include "sparsecut/io.hpp"
#include "sparsecut/oracle.hpp"
#include "sparsecut/relaxations.hpp"
#include "sparsecut/rounding.hpp"
#include "sparsecut/stcut.hpp"

namespace sparsecut::cli {
namespace {

constexpr double kSandwichTol = 1e-6;

std::string row_id(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04d", prefix, i);
  return buf;
}

std::uint64_t instance_seed(const SuiteConfig& c, int i) {
  return c.seed * 1000003ULL + static_cast<std::uint64_t>(i);
}

RandomSpec random_spec(const SuiteConfig& c, int i, int n_min, int n_max, bool rank1) {
  RandomSpec spec;
  spec.n = n_min + i % (n_max - n_min + 1);
  spec.density = 0.3 + 0.1 * (i % 5);
  spec.rank1 = rank1;
  spec.seed = instance_seed(c, i);
  return spec;
}

std::vector<SuiteRow> sandwich(const SuiteConfig& c) {
  std::vector<SuiteRow> rows;
  const int count = c.count > 0 ? c.count : 50;
  for (int i = 0; i < count; ++i) {
    const InstancePair pair = gen_random(random_spec(c, i, 4, 12, i % 2 == 0));
    SuiteRow r;
    r.id = row_id("r", i);
    r.n = pair.size();
    r.opt = brute_force_opt(pair).report.sigma;
    r.spectral = solve_spectral(pair).value;
    r.lr = solve_leighton_rao(pair).value;
    r.sdp = solve_goemans_linial(pair).value;
    r.bound_holds = *r.spectral <= *r.sdp + kSandwichTol && *r.sdp <= *r.opt + kSandwichTol &&
                    *r.lr <= *r.opt + kSandwichTol;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SuiteRow> rounding(const SuiteConfig& c) {
  std::vector<SuiteRow> rows;
  const int count = c.count > 0 ? c.count : 20;
  for (int i = 0; i < count; ++i) {
    const InstancePair pair = gen_random(random_spec(c, i, 4, 12, true));
    const RoundingCertificate cert = round_rank1(pair, instance_seed(c, i));
    SuiteRow r;
    r.id = row_id("r", i);
    r.n = pair.size();
    r.opt = brute_force_opt(pair).report.sigma;
    r.sdp = cert.epsilon;
    r.rounded = cert.report.sigma;
    r.bound = cert.bound;
    r.bound_holds = cert.bound_holds && cert.report.sigma >= *r.opt - 1e-9 &&
                    cert.report.sigma <= 8.0 * std::sqrt(cert.epsilon) + kCertTol;
    r.note = std::string(to_string(cert.branch));
    rows.push_back(std::move(r));
  }
  return rows;
}

// Exact minimum of Gbar(S) over cuts separating s from t.
double min_st_cut(const WeightedGraph& g, Vertex s, Vertex t) {
  detail::CrossingTracker tracker(g);
  double best = kInfiniteSparsity;
  detail::for_each_cut(g.size(), [&](const std::vector<char>& in_cut, Vertex v, bool proper) {
    if (v < 0) tracker.reset(in_cut);
    else tracker.flipped(v, in_cut);
    if (proper && in_cut[s] != in_cut[t]) best = std::min(best, tracker.crossing());
  });
  return 2.0 * best / g.total();
}

std::vector<SuiteRow> stcut(const SuiteConfig& c) {
  std::vector<SuiteRow> rows;
  const int count = c.count > 0 ? c.count : 20;
  for (int i = 0; i < count; ++i) {
    const InstancePair pair = gen_random(random_spec(c, i, 4, 16, false));
    const int n = pair.size();
    const StCertificate cert = st_certificate(pair.g, 0, n - 1);
    SuiteRow r;
    r.id = row_id("r", i);
    r.n = n;
    r.opt = min_st_cut(pair.g, 0, n - 1);
    r.spectral = cert.potentials.energy;
    r.rounded = cert.sweep.cut_fraction;
    r.bound = std::sqrt(cert.potentials.energy);
    r.bound_holds = cert.sweep.cut_fraction <= *r.bound + 1e-9 && cert.ratio_holds &&
                    cert.potentials.energy <= *r.opt + 1e-9;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SuiteRow> mixing(const SuiteConfig& c) {
  std::vector<SuiteRow> rows;
  const int count = c.count > 0 ? c.count : 10;
  for (int i = 0; i < count; ++i) {
    const InstancePair pair = gen_random(random_spec(c, i, 4, 12, i % 2 == 0));
    const double eps = brute_force_opt(pair).report.sigma;
    const double deltas[] = {2.0 * eps, 4.0 * eps, 0.5};
    for (int j = 0; j < 3; ++j) {
      const MixParams p{eps, deltas[j]};
      if (!(p.eps > 0.0 && p.eps <= p.delta && p.delta <= 1.0)) continue;
      const InstancePair mixed = mix_instance(pair, p);
      bool implication = true;
      detail::for_each_cut(pair.size(), [&](const std::vector<char>& in_cut, Vertex, bool proper) {
        if (!proper) return;
        const Cut cut = Cut::from_mask(in_cut);
        const double mixed_sigma = sparsity(mixed, cut).sigma;
        if (mixed_sigma <= 0.5 && sparsity(pair, cut).sigma > p.eps / p.delta + 1e-9)
          implication = false;
      });
      SuiteRow r;
      r.id = row_id("r", i) + "-d" + std::to_string(j);
      r.n = pair.size();
      r.opt = brute_force_opt(mixed).report.sigma;
      r.bound = p.delta;
      r.bound_holds = *r.opt <= p.delta + 1e-9 && implication;
      r.note = "eps " + format_number(eps);
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::vector<SuiteRow> lollipop(const SuiteConfig& c) {
  std::vector<SuiteRow> rows;
  double fitted = 0.0;
  for (const int k : {4, 8, 16, 32}) {
    const Lollipop l = gen_lollipop(k, c.seed);
    const RelaxationValue sp = solve_spectral(l.pair);
    SuiteRow r;
    r.id = row_id("k", k);
    r.n = l.pair.size();
    if (r.n <= kExhaustiveLimit) r.opt = brute_force_opt(l.pair).report.sigma;
    r.spectral = sp.value;
    r.rounded = sweep_cut(sp.x, l.pair).report.sigma;
    if (k == 4) fitted = 4.0 * sp.value;
    r.bound = 2.0 * fitted / k;
    r.bound_holds = k * sp.value <= 2.0 * fitted && (!r.opt || k > 8 || *r.opt >= 0.1);
    const Eigen::MatrixXd lg = laplacian(l.pair.g), lh = laplacian(l.pair.h);
    r.note = "witness " + format_number(l.witness.dot(lg * l.witness) / l.witness.dot(lh * l.witness));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string field(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

}  // namespace

std::vector<SuiteRow> run_suite(const std::string& name, const SuiteConfig& config) {
  std::vector<SuiteRow> rows;
  if (name == "sandwich") rows = sandwich(config);
  else if (name == "rounding") rows = rounding(config);
  else if (name == "stcut") rows = stcut(config);
  else if (name == "mixing") rows = mixing(config);
  else if (name == "lollipop") rows = lollipop(config);
  else throw InputError("unknown suite '" + name + "'");
  std::sort(rows.begin(), rows.end(),
            [](const SuiteRow& a, const SuiteRow& b) { return a.id < b.id; });
  return rows;
}

std::string suite_csv(const std::vector<SuiteRow>& rows) {
  std::string out = "id,n,opt,spectral,lr,sdp,rounded_sigma,bound,bound_holds\n";
  for (const SuiteRow& r : rows)
    out += r.id + ',' + std::to_string(r.n) + ',' + field(r.opt) + ',' + field(r.spectral) + ',' +
           field(r.lr) + ',' + field(r.sdp) + ',' + field(r.rounded) + ',' + field(r.bound) + ',' +
           (r.bound_holds ? "true" : "false") + '\n';
  return out;
}

}  // namespace sparsecut::cli
