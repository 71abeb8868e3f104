#pragma once

#include <json.hpp>

#include "berk/adelic.hpp"
#include "berk/fiber.hpp"
#include "berk/global_measure.hpp"
#include "berk/metric.hpp"
#include "berk/monge_ampere.hpp"
#include "berk/spectrum.hpp"

namespace berk {

using Json = nlohmann::ordered_json;

Json place_to_json(const Place& v);
Place place_from_json(const Json& j);

Json spectrum_point_to_json(const SpectrumPoint& x);
SpectrumPoint spectrum_point_from_json(const Json& j);

Json branch_set_to_json(const BranchSet& e);
BranchSet branch_set_from_json(const Json& j);

Json fiber_point_to_json(const FiberPoint& x);
FiberPoint fiber_point_from_json(const Json& j);

Json metric_to_json(const GlobalTropFSMetric& phi);
GlobalTropFSMetric metric_from_json(const Json& j);

Json qdivisor_to_json(const QDivisor& d);
QDivisor qdivisor_from_json(const Json& j);

Json green_to_json(const GreenFunction& g);
GreenFunction green_from_json(const Json& j);

Json arith_divisor_to_json(const ArithDivisor& d);
ArithDivisor arith_divisor_from_json(const Json& j);

Json adelic_divisor_to_json(const ModelAdelicDivisor& d);
ModelAdelicDivisor adelic_divisor_from_json(const Json& j);

Json boundary_divisor_to_json(const BoundaryDivisor& d);
BoundaryDivisor boundary_divisor_from_json(const Json& j);

Json measure_to_json(const FiberMeasure& m);
FiberMeasure measure_from_json(const Json& j);
std::string measure_grid_csv(const FiberMeasure& m);

Json load_json_file(const std::string& path);

}  // namespace berk
