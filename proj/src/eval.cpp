#include "lensremap/eval.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "lensremap/onthefly.hpp"
#include "lensremap/sampling.hpp"

namespace lensremap {

EvalReport geometric_error(const RemapField& candidate, const RemapField& reference) {
  if (candidate.width() != reference.width() || candidate.height() != reference.height())
    throw ValidationError("geometric_error: map dimensions differ");
  EvalReport r;
  r.width = reference.width();
  r.height = reference.height();
  const std::size_t n = reference.size();
  r.error_field.resize(n);
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_sq_x = 0.0;
  double sum_sq_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = candidate.plane_x()[i] - reference.plane_x()[i];
    const double dy = candidate.plane_y()[i] - reference.plane_y()[i];
    const double e = std::hypot(dx, dy);
    r.error_field[i] = e;
    sum += e;
    sum_sq += e * e;
    sum_sq_x += dx * dx;
    sum_sq_y += dy * dy;
    r.max = std::max(r.max, e);
  }
  const auto count = static_cast<double>(n);
  r.mean = sum / count;
  r.rmse = std::sqrt(sum_sq / count);
  r.rmse_x = std::sqrt(sum_sq_x / count);
  r.rmse_y = std::sqrt(sum_sq_y / count);
  return r;
}

Image export_heatmap(const EvalReport& report, double scale) {
  if (!(scale > 0.0)) throw ValidationError("heatmap scale must be positive");
  Image img(report.width, report.height, 1);
  for (int v = 0; v < report.height; ++v) {
    for (int u = 0; u < report.width; ++u) {
      img.at(u, v) = static_cast<std::uint8_t>(std::round(255.0 * std::min(1.0, report.error(u, v) / scale)));
    }
  }
  return img;
}

void write_error_plane(std::ostream& out, const EvalReport& report) {
  for (double e : report.error_field) {
    auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(e));
    char bytes[4];
    for (int k = 0; k < 4; ++k) bytes[k] = static_cast<char>((bits >> (8 * k)) & 0xFF);
    out.write(bytes, 4);
  }
}

void write_error_plane(const std::string& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write error plane '" + path + "'");
  write_error_plane(out, report);
}

std::vector<double> error_autocorrelation(const EvalReport& report, Axis axis, int max_lag) {
  const bool along_x = axis == Axis::kX;
  const int length = along_x ? report.width : report.height;
  const int lines = along_x ? report.height : report.width;
  if (max_lag < 0 || max_lag >= length) throw ValidationError("autocorrelation lag out of range");

  auto sample = [&](int line, int pos) { return along_x ? report.error(pos, line) : report.error(line, pos); };

  std::vector<double> acf(static_cast<std::size_t>(max_lag) + 1, 0.0);
  std::vector<double> centered(static_cast<std::size_t>(length));
  for (int line = 0; line < lines; ++line) {
    double mean = 0.0;
    for (int p = 0; p < length; ++p) mean += sample(line, p);
    mean /= length;
    for (int p = 0; p < length; ++p) centered[static_cast<std::size_t>(p)] = sample(line, p) - mean;
    for (int lag = 0; lag <= max_lag; ++lag) {
      double sum = 0.0;
      for (int p = 0; p + lag < length; ++p)
        sum += centered[static_cast<std::size_t>(p)] * centered[static_cast<std::size_t>(p + lag)];
      acf[static_cast<std::size_t>(lag)] += sum / (length - lag);
    }
  }
  const double var = acf[0];
  if (var > 0.0) {
    for (double& a : acf) a /= var;
  }
  return acf;
}

RemapField full_lut_field(const RemapField& reference) {
  RemapField f = reference;
  for (double& x : f.plane_x()) x = static_cast<float>(x);
  for (double& y : f.plane_y()) y = static_cast<float>(y);
  return f;
}

const char* approach_name(Approach a) {
  switch (a) {
    case Approach::kReference:
      return "reference";
    case Approach::kOnTheFly:
      return "onthefly";
    case Approach::kSampled:
      return "sampled";
    case Approach::kFullLut:
      return "full-lut";
  }
  return "?";
}

std::optional<Approach> parse_approach(const std::string& name) {
  for (Approach a : {Approach::kReference, Approach::kOnTheFly, Approach::kSampled, Approach::kFullLut}) {
    if (name == approach_name(a)) return a;
  }
  return std::nullopt;
}

std::vector<SweepCell> SweepGrid::cells() const {
  std::vector<SweepCell> out;
  for (int f : frac_bits) out.push_back({Approach::kOnTheFly, f});
  for (int n : sampling_factors) out.push_back({Approach::kSampled, n});
  if (include_full_lut) out.push_back({Approach::kFullLut, full_lut_bits});
  return out;
}

SweepResult sweep(const LensConfig& base, const SweepGrid& grid, unsigned threads, const SweepObserver& observer) {
  if (grid.factors.empty()) throw ValidationError("sweep: no distortion factors given");
  base.validate();
  for (double f : grid.factors) {
    if (!std::isfinite(f) || f < 0) throw ValidationError("sweep: distortion factors must be finite and >= 0");
  }
  for (int f : grid.frac_bits) QFormat(f, grid.onthefly_int_bits);
  QFormat(grid.sample_frac_bits, grid.sample_int_bits);
  if (grid.sample_frac_bits + grid.sample_int_bits > 32) throw ValidationError("sweep: samples must fit in 32 bits");
  const int shorter = std::min(base.image_width, base.image_height);
  for (int n : grid.sampling_factors) {
    if (n < 1 || n > 15 || (1 << n) >= shorter)
      throw ValidationError("sweep: sampling factor " + std::to_string(n) + " does not fit the image");
  }
  SweepResult result;
  for (double factor : grid.factors) {
    LensConfig cfg = base;
    cfg.coeffs = scale_distortion(base.coeffs, factor);
    const RemapField reference = build_reference_map(cfg, threads);

    for (const SweepCell& cell : grid.cells()) {
      SweepRow row;
      row.approach = cell.approach;
      row.param = cell.param;
      row.factor = factor;
      RemapField candidate;
      try {
        switch (cell.approach) {
          case Approach::kOnTheFly: {
            candidate = onthefly_field(cfg, QFormat(cell.param, grid.onthefly_int_bits), threads);
            row.resources = estimate_onthefly(cfg);
            break;
          }
          case Approach::kSampled: {
            const SubsampledMap s = subsample(reference, cell.param, grid.sample_frac_bits, grid.sample_int_bits);
            candidate = sampled_field(s, threads);
            row.resources = estimate_sampling(s.grid_w(), s.grid_h(), s.sample_bits());
            break;
          }
          case Approach::kFullLut: {
            candidate = full_lut_field(reference);
            row.resources = estimate_full_lut(cfg.image_width, cfg.image_height, cell.param);
            break;
          }
          case Approach::kReference: {
            candidate = reference;
            break;
          }
        }
      } catch (const Error& e) {
        char where[96];
        std::snprintf(where, sizeof where, "sweep cell %s param=%d factor=%g: ", approach_name(cell.approach),
                      cell.param, factor);
        throw EvaluationError(where + std::string(e.what()));
      }
      const EvalReport report = geometric_error(candidate, reference);
      row.rmse = report.rmse;
      row.mean = report.mean;
      row.max = report.max;
      if (observer) observer(row, report);
      result.rows.push_back(row);
    }
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "approach,param,factor,rmse,mean,max,mem_bits,mul,add,div\n";
  char line[256];
  for (const SweepRow& r : result.rows) {
    std::snprintf(line, sizeof line, "%s,%d,%.17g,%.17g,%.17g,%.17g,%" PRId64 ",%d,%d,%d\n", approach_name(r.approach),
                  r.param, r.factor, r.rmse, r.mean, r.max, r.resources.memory_bits, r.resources.multipliers,
                  r.resources.adders, r.resources.dividers);
    out << line;
  }
}

}  // namespace lensremap
