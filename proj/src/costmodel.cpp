#include "pud/costmodel.hpp"

#include "pud/error.hpp"

namespace pud {

void CostParams::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw ValidationError(std::string("cost parameter ") + name + " must be positive");
  };
  positive(t_aap_ns, "t_aap_ns");
  positive(t_tra_ns, "t_tra_ns");
  positive(e_act_pj, "e_act_pj");
  positive(e_pre_pj, "e_pre_pj");
  positive(transpose_ns_per_word, "transpose_ns_per_word");
  positive(banks, "banks");
  positive(columns_per_subarray, "columns_per_subarray");
}

CostReport estimate(const ActivationCount& count, const CostParams& params) {
  params.validate();
  CostReport r;
  r.aap = count.aap;
  r.tra = count.tra;
  r.activations = count.total;
  r.latency_ns = static_cast<double>(count.aap) * params.t_aap_ns + static_cast<double>(count.tra) * params.t_tra_ns;
  r.energy_pj = static_cast<double>(count.total) * params.e_act_pj +
                static_cast<double>(count.aap + count.tra) * params.e_pre_pj;
  if (r.latency_ns > 0)
    r.throughput_ops_per_s =
        static_cast<double>(params.banks) * static_cast<double>(params.columns_per_subarray) / (r.latency_ns * 1e-9);
  return r;
}

CostReport estimate(const MicroProgram& program, const CostParams& params) {
  return estimate(activation_count(program), params);
}

CostRatio compare(const CostReport& a, const CostReport& b) {
  CostRatio r;
  const auto ratio = [&](double x, double y) -> std::optional<double> {
    if (y == 0) {
      r.undefined = true;
      return std::nullopt;
    }
    return x / y;
  };
  r.latency = ratio(a.latency_ns, b.latency_ns);
  r.energy = ratio(a.energy_pj, b.energy_pj);
  r.throughput = ratio(a.throughput_ops_per_s, b.throughput_ops_per_s);
  return r;
}

double transpose_latency_ns(std::size_t values, unsigned width, const CostParams& params) {
  params.validate();
  // One word per 64 columns per bit row, both directions counted separately by callers.
  const double words = static_cast<double>((values + 63) / 64) * width;
  return words * params.transpose_ns_per_word;
}

}  // namespace pud
