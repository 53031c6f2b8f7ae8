#include "aerloc/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include "aerloc/text_io.hpp"

namespace aerloc {
namespace {

double logistic_core(double x, double v) {
  return std::pow(1.0 + std::exp(-5.0 * x), -1.0 / v);
}

double rectifying(double x, double d, bool offset_form) {
  const double ad = std::fabs(d);
  if (d < 0.0) {
    if (x <= ad) return 0.0;
    return offset_form ? (1.0 + ad) * (x - ad) + d * d : (x - ad) / (1.0 - ad);
  }
  if (x <= 0.0) return d * (1.0 + x);
  return x * (1.0 - d) + d;
}

}  // namespace

std::string_view to_string(ConversionKind kind) {
  switch (kind) {
    case ConversionKind::linear: return "linear";
    case ConversionKind::softmax: return "softmax";
    case ConversionKind::rectifying: return "rectifying";
    case ConversionKind::rectifying_offset: return "rectifying_offset";
    case ConversionKind::logistic: return "logistic";
  }
  return "unknown";
}

bool has_parameter(ConversionKind kind) {
  return kind != ConversionKind::linear && kind != ConversionKind::softmax;
}

void ConversionSpec::validate() const {
  if (!std::isfinite(param)) {
    throw std::invalid_argument("conversion parameter must be finite");
  }
  switch (kind) {
    case ConversionKind::logistic:
      if (!(param > 0.0)) {
        throw std::invalid_argument("logistic conversion requires v > 0");
      }
      break;
    case ConversionKind::rectifying:
    case ConversionKind::rectifying_offset:
      if (param < -1.0 || param > 1.0) {
        throw std::invalid_argument("rectifying conversion requires d in [-1, 1]");
      }
      if (kind == ConversionKind::rectifying && param == -1.0) {
        throw std::invalid_argument("rectifying conversion requires d > -1");
      }
      break;
    default:
      break;
  }
}

std::string ConversionSpec::label() const {
  std::string out(to_string(kind));
  if (has_parameter(kind)) out += ":" + format_double(param);
  return out;
}

ConversionSpec ConversionSpec::parse(std::string_view kind, double param) {
  ConversionSpec spec;
  if (kind == "linear") {
    spec.kind = ConversionKind::linear;
  } else if (kind == "softmax") {
    spec.kind = ConversionKind::softmax;
  } else if (kind == "rectifying") {
    spec.kind = ConversionKind::rectifying;
  } else if (kind == "rectifying_offset") {
    spec.kind = ConversionKind::rectifying_offset;
  } else if (kind == "logistic") {
    spec.kind = ConversionKind::logistic;
  } else {
    throw std::invalid_argument("unknown conversion '" + std::string(kind) + "'");
  }
  spec.param = has_parameter(spec.kind) ? param : 0.0;
  spec.validate();
  return spec;
}

ConversionSpec ConversionSpec::parse_label(std::string_view label) {
  const auto colon = label.find(':');
  if (colon == std::string_view::npos) return parse(label, 0.0);
  return parse(label.substr(0, colon), parse_double(label.substr(colon + 1)));
}

double convert(const ConversionSpec& spec, double r) {
  if (!(r >= -1.0 && r <= 1.0)) {
    throw std::invalid_argument("convert: similarity outside [-1, 1]");
  }
  switch (spec.kind) {
    case ConversionKind::linear:
      return (r + 1.0) / 2.0;
    case ConversionKind::softmax:
      return std::exp(r);
    case ConversionKind::rectifying:
    case ConversionKind::rectifying_offset:
      spec.validate();
      return rectifying(r, spec.param,
                        spec.kind == ConversionKind::rectifying_offset);
    case ConversionKind::logistic:
      spec.validate();
      return logistic_core(r, spec.param) / logistic_core(1.0, spec.param);
  }
  throw std::invalid_argument("convert: unknown conversion kind");
}

WeightVector normalize(std::span<const double> likelihoods) {
  if (likelihoods.empty()) throw std::invalid_argument("normalize: empty input");
  double total = 0.0;
  for (const double s : likelihoods) {
    if (!(s >= 0.0)) throw std::invalid_argument("normalize: negative likelihood");
    total += s;
  }
  WeightVector out;
  out.weights.resize(likelihoods.size());
  if (total > 0.0) {
    for (std::size_t i = 0; i < likelihoods.size(); ++i) {
      out.weights[i] = likelihoods[i] / total;
    }
  } else {
    out.weights.assign(likelihoods.size(), 1.0 / likelihoods.size());
    out.degenerate = true;
  }
  return out;
}

}  // namespace aerloc
