#include "nidsfs/engines.hpp"

namespace nidsfs {

using nlohmann::ordered_json;

ordered_json to_json(const NBModel& model) {
  ordered_json j;
  j["engine"] = "nb";
  j["priors"] = model.priors;
  ordered_json features = ordered_json::array();
  for (const auto& f : model.features) {
    ordered_json fj;
    fj["attribute"] = f.attribute;
    if (const auto* g = std::get_if<GaussianParams>(&f.params)) {
      fj["kind"] = "gaussian";
      fj["mean"] = g->mean;
      fj["variance"] = g->variance;
    } else {
      const auto& c = std::get<CategoricalParams>(f.params);
      fj["kind"] = "categorical";
      fj["vocabulary"] = c.vocabulary;
      fj["probability"] = c.probability;
    }
    features.push_back(std::move(fj));
  }
  j["features"] = std::move(features);
  return j;
}

ordered_json to_json(const LRModel& model) {
  ordered_json j;
  j["engine"] = "lr";
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["iterations"] = model.iterations;
  j["final_loss"] = model.final_loss;
  return j;
}

ordered_json to_json(const EMModel& model) {
  ordered_json j;
  j["engine"] = "em";
  ordered_json comps = ordered_json::array();
  for (std::size_t k = 0; k < model.components.size(); ++k) {
    const auto& c = model.components[k];
    ordered_json cj;
    cj["weight"] = c.weight;
    cj["mean"] = c.mean;
    cj["variance"] = c.variance;
    if (k < model.cluster_labels.size()) cj["label"] = to_int(model.cluster_labels[k]);
    comps.push_back(std::move(cj));
  }
  j["components"] = std::move(comps);
  j["iterations"] = model.iterations;
  j["log_likelihood_trace"] = model.log_likelihood_trace;
  return j;
}

}  // namespace nidsfs
