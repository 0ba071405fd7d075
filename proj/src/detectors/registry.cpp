#include "adbench/detectors/registry.hpp"

#include <algorithm>
#include <string>

namespace adbench {

namespace {

std::size_t positive(std::int64_t v, const char* name) {
  if (v <= 0) throw ConfigError(std::string("parameter ") + name + " must be positive");
  return static_cast<std::size_t>(v);
}

ParamSet with_defaults(Algorithm algorithm, const ParamSet& params) {
  ParamSet full;
  const ParamGrid grid = default_param_grid(algorithm);
  for (const auto& [name, values] : grid.axes()) {
    full.set(name, params.has(name) ? params.at(name) : values.front());
  }
  for (const auto& [name, value] : params.items()) {
    if (!full.has(name)) full.set(name, value);
  }
  return full;
}

}  // namespace

FittedModel fit_detector(Algorithm algorithm, const ParamSet& params, const PointSet& train, std::uint64_t seed) {
  if (train.empty()) throw FitError(std::string(algorithm_name(algorithm)) + ": empty training set");
  const ParamSet p = with_defaults(algorithm, params);
  std::shared_ptr<const Scorer> scorer;
  switch (algorithm) {
    case Algorithm::KMeans:
      scorer = train_kmeans(train, positive(p.get_int("k"), "k"), seed);
      break;
    case Algorithm::GMeans:
      scorer = train_gmeans(train, seed);
      break;
    case Algorithm::Dbscan:
      scorer = train_dbscan(train, resolve_eps(p.at("eps"), train, seed), positive(p.get_int("min_pts"), "min_pts"));
      break;
    case Algorithm::Ldcof:
      scorer = train_ldcof(train, positive(p.get_int("k"), "k"), seed);
      break;
    case Algorithm::Hbos:
      scorer = train_hbos(train, resolve_bins(p.at("bins"), train.size()));
      break;
    case Algorithm::Sos:
      scorer = train_sos(train, p.get_double("h"));
      break;
    case Algorithm::Isos: {
      const auto kernel = to_lower(p.get_string_or("kernel", "t")) == "gaussian" ? AffinityKernel::Gaussian
                                                                                 : AffinityKernel::StudentT;
      scorer = train_isos(train, positive(p.get_int("k"), "k"), p.get_double("phi"), kernel);
      break;
    }
    case Algorithm::OneClassSvm: {
      SvmScorer::Options o;
      o.kernel = parse_svm_kernel(p.get_string("kernel"));
      o.nu = p.get_double("nu");
      o.gamma = p.get_double_or("gamma", 0.0);
      scorer = train_ocsvm(train, o);
      break;
    }
    case Algorithm::IsolationForest:
      scorer = train_iforest(train, positive(p.get_int("trees"), "trees"), positive(p.get_int("samples"), "samples"),
                             seed);
      break;
    case Algorithm::Som: {
      SomScorer::Options o;
      o.side = positive(p.get_int("side"), "side");
      o.base_a = p.get_double("base_a");
      o.min_a = p.get_double("min_a");
      o.decay = p.get_double("decay");
      scorer = train_som(train, o, seed);
      break;
    }
    case Algorithm::Abod: {
      if (train.size() > kAbodTrainCap) {
        Rng rng(seed);
        auto idx = sample_without_replacement(train.size(), kAbodTrainCap, rng);
        std::sort(idx.begin(), idx.end());
        scorer = train_abod(train.subset(idx));
      } else {
        scorer = train_abod(train);
      }
      break;
    }
    case Algorithm::FastAbod:
      scorer = train_fastabod(train, positive(p.get_int("k"), "k"));
      break;
    case Algorithm::Knn:
      scorer = train_knn(train, positive(p.get_int("k"), "k"));
      break;
    case Algorithm::Odin:
      scorer = train_odin(train, positive(p.get_int("k"), "k"));
      break;
    case Algorithm::Lof:
      scorer = train_lof(train, positive(p.get_int("k"), "k"));
      break;
    case Algorithm::Cof:
      scorer = train_cof(train, positive(p.get_int("k"), "k"));
      break;
    case Algorithm::Sdo: {
      SdoScorer::Options o;
      o.observers = positive(p.get_int("observers"), "observers");
      o.x = positive(p.get_int("x"), "x");
      o.idle_fraction = p.get_double("q");
      o.aggregate = to_lower(p.get_string_or("aggregate", "median")) == "mean" ? ObserverAggregate::Mean
                                                                              : ObserverAggregate::Median;
      scorer = train_sdo(train, o, seed);
      break;
    }
  }
  return FittedModel{algorithm, params, std::move(scorer)};
}

}  // namespace adbench
