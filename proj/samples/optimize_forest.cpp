// Fit a forest on synthetic ads and compare the four solvers on it.

#include <cstdio>
#include <string>

#include "ocnc/harness/synthetic.hpp"
#include "ocnc/regress/model.hpp"
#include "ocnc/solve/solvers.hpp"
#include "ocnc/solve/value_function.hpp"

using namespace ocnc;

int main() {
  harness::SyntheticSpec spec;
  spec.rows = 1000;
  const auto data = harness::generate_synthetic(spec);

  regress::Dataset d(ads::FeatureCase::A, kNodeCount);
  for (std::size_t i = 0; i < data.ads.size(); ++i) {
    const auto x = ads::vectorize(data.ads[i], data.counts[i], ads::FeatureCase::A);
    d.add(x->values, static_cast<double>(data.ads[i].clicks));
  }
  const auto model = regress::fit_rfr(d, {}, 7);
  const solve::ModelValue f(model);
  const solve::CachedValue cached(f);

  std::printf("%-8s %3s %10s %12s  combination\n", "solver", "k", "value", "evaluations");
  for (std::uint64_t k : {2, 5, 10})
    for (auto kind : solve::kAllSolvers) {
      const auto r = solve::solve(kind, cached, k, {}, k);
      std::printf("%-8s %3llu %10.3f %12llu  %s\n", std::string(solve::name_of(kind)).c_str(),
                  static_cast<unsigned long long>(k), r.value, static_cast<unsigned long long>(r.evaluations),
                  r.best.to_string().c_str());
    }
}
