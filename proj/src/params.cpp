#include "jsflow/params.hpp"

#include <cmath>
#include <string>

namespace jsflow {

void JsParams::validate() const {
  auto fail = [](const std::string& what) { throw InvalidParameter("JsParams: " + what); };
  if (!(Re >= 0.0) || !std::isfinite(Re)) fail("Re must be >= 0");
  if (!(Wi > 0.0) || !std::isfinite(Wi)) fail("Wi must be > 0");
  if (!(mu_s > 0.0 && mu_s < 1.0)) fail("mu_s must lie in (0,1)");
  if (!(xi >= 0.0 && xi < 1.0)) fail("xi must lie in [0,1) so that a = 1 - xi > 0");
  if (!(q > 0.0) || !std::isfinite(q)) fail("q must be > 0");
}

}  // namespace jsflow
