#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "lensremap/eval.hpp"
#include "lensremap/io.hpp"
#include "lensremap/onthefly.hpp"
#include "lensremap/remap.hpp"
#include "lensremap/resources.hpp"
#include "lensremap/sampling.hpp"
#include "lensremap/stream.hpp"

namespace lensremap::cli {

namespace {

// Options that select and parameterize one map approach.
struct MapOptions {
  std::string config_path;
  std::string approach_name;
  double factor = 1.0;
  int frac_bits = 0;
  int int_bits = QFormat::kDefaultIntBits;
  int n = 0;
  int sample_frac_bits = SubsampledMap::kDefaultSampleFracBits;
  int sample_int_bits = SubsampledMap::kDefaultSampleIntBits;

  CLI::Option* config_opt = nullptr;
  CLI::Option* approach_opt = nullptr;
  CLI::Option* factor_opt = nullptr;
  CLI::Option* frac_opt = nullptr;
  CLI::Option* int_opt = nullptr;
  CLI::Option* n_opt = nullptr;
  CLI::Option* sfrac_opt = nullptr;
  CLI::Option* sint_opt = nullptr;

  void add_to(CLI::App& app) {
    config_opt = app.add_option("--config", config_path, "Calibration JSON")->check(CLI::ExistingFile);
    approach_opt = app.add_option("--approach", approach_name, "reference | onthefly | sampled | full-lut");
    factor_opt = app.add_option("--factor", factor, "Distortion factor applied to k1..k3, p1, p2 (default 1)");
    frac_opt = app.add_option("--frac-bits", frac_bits, "On-the-fly fractional bits (1..30)");
    int_opt = app.add_option("--int-bits", int_bits, "On-the-fly integer bits including sign (default 12)");
    n_opt = app.add_option("--n", n, "Sampling factor, grid pitch 2^n px");
    sfrac_opt = app.add_option("--sample-frac-bits", sample_frac_bits, "Fractional bits of stored samples (default 8)");
    sint_opt = app.add_option("--sample-int-bits", sample_int_bits, "Integer bits of stored samples incl. sign (default 13)");
  }

  bool any_given() const {
    const auto opts = all();
    return std::any_of(opts.begin(), opts.end(), [](CLI::Option* o) { return o->count() > 0; });
  }

  std::array<CLI::Option*, 8> all() const {
    return {config_opt, approach_opt, factor_opt, frac_opt, int_opt, n_opt, sfrac_opt, sint_opt};
  }

  /// Enforces that exactly the parameters of the chosen approach are present.
  Approach resolve() const {
    if (!config_opt->count()) throw ValidationError("--config is required");
    if (!approach_opt->count()) throw ValidationError("--approach is required");
    const auto a = parse_approach(approach_name);
    if (!a) throw ValidationError("unknown approach '" + approach_name + "'");
    auto reject = [&](CLI::Option* o) {
      if (o->count()) throw ValidationError(o->get_name() + " does not apply to approach " + approach_name);
    };
    switch (*a) {
      case Approach::kOnTheFly:
        if (!frac_opt->count()) throw ValidationError("approach onthefly requires --frac-bits");
        reject(n_opt);
        reject(sfrac_opt);
        reject(sint_opt);
        break;
      case Approach::kSampled:
        if (!n_opt->count()) throw ValidationError("approach sampled requires --n");
        reject(frac_opt);
        reject(int_opt);
        break;
      case Approach::kReference:
      case Approach::kFullLut:
        for (CLI::Option* o : {frac_opt, int_opt, n_opt, sfrac_opt, sint_opt}) reject(o);
        break;
    }
    return *a;
  }

  LensConfig config() const {
    LensConfig cfg = load_lens_config(config_path);
    cfg.coeffs = scale_distortion(cfg.coeffs, factor);
    return cfg;
  }
};

struct BuiltMap {
  Approach approach;
  std::variant<RemapField, SubsampledMap> data;
  long saturated_pixels = 0;

  MapProvider provider() const {
    if (const auto* s = std::get_if<SubsampledMap>(&data)) return MapProvider::sampled(*s);
    return MapProvider::reference(std::get<RemapField>(data));
  }
};

BuiltMap build_map(const MapOptions& opts, unsigned threads) {
  const Approach approach = opts.resolve();
  const LensConfig cfg = opts.config();
  switch (approach) {
    case Approach::kReference:
      return {approach, build_reference_map(cfg, threads)};
    case Approach::kFullLut:
      return {approach, full_lut_field(build_reference_map(cfg, threads))};
    case Approach::kOnTheFly: {
      auto r = onthefly_field_report(cfg, QFormat(opts.frac_bits, opts.int_bits), threads);
      return {approach, std::move(r.field), r.saturated_pixels};
    }
    case Approach::kSampled:
      return {approach, subsample(build_reference_map(cfg, threads), opts.n, opts.sample_frac_bits, opts.sample_int_bits)};
  }
  throw ValidationError("unreachable approach");
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

void print_bounds(std::ostream& out, const DisplacementBounds& b) {
  const LineRequirement req = required_lines(b);
  out << format("displacement x: [%.6f, %.6f] px\n", b.min_dx, b.max_dx);
  out << format("displacement y: [%.6f, %.6f] px\n", b.min_dy, b.max_dy);
  out << format("line buffer: %d lines, read delay %d rows\n", req.lines, req.read_delay);
}

std::vector<double> parse_number_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string("invalid value '") + item + "' in " + what);
    }
  }
  if (values.empty()) throw ValidationError(std::string(what) + " must not be empty");
  return values;
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  for (double v : parse_number_list(text, what)) {
    if (v != static_cast<int>(v)) throw ValidationError(std::string(what) + " must be integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lens distortion correction maps: reference, fixed-point on-the-fly and subsampled LUT"};
  app.name("lensremap");
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0 = all cores)");

  // gen-map
  auto* gen = app.add_subcommand("gen-map", "Build a map and write it as FMAP or SMAP");
  MapOptions gen_map;
  gen_map.add_to(*gen);
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output map file")->required();

  // undistort
  auto* und = app.add_subcommand("undistort", "Remap an image (PGM/PPM) offline or through the line-buffer model");
  MapOptions und_map;
  und_map.add_to(*und);
  std::string und_image, und_out, und_map_file, und_mode = "offline", und_lines = "auto", und_border = "zero";
  und->add_option("--image", und_image, "Input PGM/PPM")->required()->check(CLI::ExistingFile);
  und->add_option("--out", und_out, "Output PGM/PPM")->required();
  auto* und_map_opt = und->add_option("--map", und_map_file, "FMAP or SMAP file")->check(CLI::ExistingFile);
  und->add_option("--mode", und_mode, "offline | stream")->check(CLI::IsMember({"offline", "stream"}));
  auto* und_lines_opt = und->add_option("--lines", und_lines, "Line buffer capacity or 'auto' (stream mode)");
  und->add_option("--border", und_border, "zero | clamp")->check(CLI::IsMember({"zero", "clamp"}));

  // sweep
  auto* swp = app.add_subcommand("sweep", "Evaluate approaches over distortion factors and write CSV");
  std::string swp_config, swp_out, swp_factors = "1,2,3,4,5", swp_frac = "12,16,20", swp_n = "5,6,7";
  std::string swp_heatmaps, swp_planes;
  double swp_scale = 1.0;
  SweepGrid grid;
  swp->add_option("--config", swp_config, "Calibration JSON (default: built-in 640x480 calibration)")
      ->check(CLI::ExistingFile);
  swp->add_option("--out", swp_out, "Output CSV")->required();
  swp->add_option("--factors", swp_factors, "Comma-separated distortion factors");
  swp->add_option("--frac-bits", swp_frac, "Comma-separated on-the-fly fractional bits (empty list: none)");
  swp->add_option("--n", swp_n, "Comma-separated sampling factors");
  swp->add_option("--sample-frac-bits", grid.sample_frac_bits, "Fractional bits of stored samples");
  swp->add_option("--sample-int-bits", grid.sample_int_bits, "Integer bits of stored samples incl. sign");
  swp->add_option("--int-bits", grid.onthefly_int_bits, "On-the-fly integer bits incl. sign");
  swp->add_flag("--full-lut", grid.include_full_lut, "Also evaluate a 32-bit float full-resolution LUT");
  swp->add_option("--heatmaps", swp_heatmaps, "Directory for per-cell error heatmaps (PGM)");
  swp->add_option("--heatmap-scale", swp_scale, "Error (px) mapped to full intensity");
  swp->add_option("--error-planes", swp_planes, "Directory for per-cell float32 error planes");

  // estimate
  auto* est = app.add_subcommand("estimate", "Print operator and memory estimates per approach");
  std::string est_config;
  int est_n = 5, est_sample_bits = SubsampledMap::kDefaultSampleFracBits + SubsampledMap::kDefaultSampleIntBits;
  int est_lut_bits = 32;
  est->add_option("--config", est_config, "Calibration JSON (default: built-in 640x480 calibration)")
      ->check(CLI::ExistingFile);
  est->add_option("--n", est_n, "Sampling factor for the sampled approach");
  est->add_option("--sample-bits", est_sample_bits, "Stored bits per sample");
  est->add_option("--lut-bits", est_lut_bits, "Stored bits per full-LUT value");

  // inspect
  auto* ins = app.add_subcommand("inspect", "Print map statistics and displacement bounds");
  MapOptions ins_map;
  ins_map.add_to(*ins);
  std::string ins_file;
  auto* ins_file_opt = ins->add_option("--map", ins_file, "FMAP or SMAP file")->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      const BuiltMap m = build_map(gen_map, threads);
      if (const auto* s = std::get_if<SubsampledMap>(&m.data)) {
        write_smap(gen_out, *s);
        out << format("wrote SMAP %dx%d grid (%zu samples per axis) to %s\n", s->grid_w(), s->grid_h(),
                      s->sample_count(), gen_out.c_str());
      } else {
        const auto& f = std::get<RemapField>(m.data);
        write_fmap(gen_out, f);
        out << format("wrote FMAP %dx%d to %s\n", f.width(), f.height(), gen_out.c_str());
      }
      if (m.saturated_pixels > 0) err << "warning: " << m.saturated_pixels << " pixels saturated\n";
      return kOk;
    }

    if (und->parsed()) {
      const bool from_file = und_map_opt->count() > 0;
      if (from_file == und_map.any_given())
        throw ValidationError("give either --map or --config with --approach");
      if (und_mode != "stream" && und_lines_opt->count())
        throw ValidationError("--lines only applies to --mode stream");
      MapProvider provider = [&] {
        if (!from_file) return build_map(und_map, threads).provider();
        auto data = read_map_file(und_map_file);
        if (auto* s = std::get_if<SubsampledMap>(&data)) return MapProvider::sampled(std::move(*s));
        return MapProvider::reference(std::move(std::get<RemapField>(data)));
      }();
      const Image src = read_pnm(und_image);
      const BorderPolicy border = und_border == "clamp" ? BorderPolicy::kClamp : BorderPolicy::kConstantZero;
      Image dst;
      if (und_mode == "stream") {
        StreamOptions options;
        options.border = border;
        if (und_lines != "auto") {
          try {
            std::size_t used = 0;
            options.lines = std::stoi(und_lines, &used);
            if (used != und_lines.size()) throw std::invalid_argument(und_lines);
          } catch (const std::exception&) {
            throw ValidationError("--lines must be an integer or 'auto'");
          }
        }
        StreamResult r = stream_remap(src, provider, options);
        out << format("stream: %d lines, read delay %d rows, %d row periods\n", r.lines, r.read_delay, r.steps);
        dst = std::move(r.image);
      } else {
        dst = remap_image(src, provider, border, threads);
      }
      write_pnm(und_out, dst);
      return kOk;
    }

    if (swp->parsed()) {
      const LensConfig base = swp_config.empty() ? base_calibration() : load_lens_config(swp_config);
      grid.factors = parse_number_list(swp_factors, "--factors");
      grid.frac_bits = swp_frac.empty() ? std::vector<int>{} : parse_int_list(swp_frac, "--frac-bits");
      grid.sampling_factors = swp_n.empty() ? std::vector<int>{} : parse_int_list(swp_n, "--n");
      for (const auto& dir : {swp_heatmaps, swp_planes}) {
        if (!dir.empty()) std::filesystem::create_directories(dir);
      }
      auto cell_name = [](const SweepRow& row) {
        return format("%s_p%d_f%g", approach_name(row.approach), row.param, row.factor);
      };
      const SweepResult result = sweep(base, grid, threads, [&](const SweepRow& row, const EvalReport& report) {
        if (!swp_heatmaps.empty())
          write_pnm(swp_heatmaps + "/" + cell_name(row) + ".pgm", export_heatmap(report, swp_scale));
        if (!swp_planes.empty()) write_error_plane(swp_planes + "/" + cell_name(row) + ".f32", report);
      });
      std::ofstream csv(swp_out, std::ios::binary);
      if (!csv) throw Error("cannot write '" + swp_out + "'");
      write_sweep_csv(csv, result);
      csv.flush();
      if (!csv) throw Error("write failed for '" + swp_out + "'");
      out << format("wrote %zu rows to %s\n", result.rows.size(), swp_out.c_str());
      return kOk;
    }

    if (est->parsed()) {
      const LensConfig cfg = est_config.empty() ? base_calibration() : load_lens_config(est_config);
      if (est_n < 1 || est_n > 15 || (1 << est_n) >= std::min(cfg.image_width, cfg.image_height))
        throw ValidationError("--n: sampling pitch must be smaller than the image");
      const int gw = SubsampledMap::grid_extent(cfg.image_width, est_n);
      const int gh = SubsampledMap::grid_extent(cfg.image_height, est_n);
      const ResourceEstimate otf = estimate_onthefly(cfg);
      const ResourceEstimate smp = estimate_sampling(gw, gh, est_sample_bits);
      const ResourceEstimate lut = estimate_full_lut(cfg.image_width, cfg.image_height, est_lut_bits);
      out << format("%-12s %12s %8s %8s %16s\n", "approach", "multipliers", "adders", "dividers", "memory_bits");
      auto row = [&](const char* name, const ResourceEstimate& e) {
        out << format("%-12s %12d %8d %8d %16" PRId64 "\n", name, e.multipliers, e.adders, e.dividers, e.memory_bits);
      };
      row("onthefly", otf);
      row(format("sampled n=%d", est_n).c_str(), smp);
      row("full-lut", lut);
      return kOk;
    }

    if (ins->parsed()) {
      const bool from_file = ins_file_opt->count() > 0;
      if (from_file == ins_map.any_given()) throw ValidationError("give either --map or --config with --approach");
      std::variant<RemapField, SubsampledMap> data =
          from_file ? read_map_file(ins_file) : build_map(ins_map, threads).data;
      RemapField field;
      if (const auto* s = std::get_if<SubsampledMap>(&data)) {
        out << format("sampled map: image %dx%d, n=%d (pitch %d px), grid %dx%d = %zu samples, %d+%d bits\n",
                      s->image_width(), s->image_height(), s->n(), s->pitch(), s->grid_w(), s->grid_h(),
                      s->sample_count(), s->sample_int_bits(), s->sample_frac_bits());
        out << format("memory: %" PRId64 " bits\n", memory_footprint(*s, s->sample_bits()));
        field = sampled_field(*s, threads);
      } else {
        field = std::get<RemapField>(std::move(data));
        out << format("float map: %dx%d\n", field.width(), field.height());
      }
      print_bounds(out, displacement_bounds(field));
      return kOk;
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
  return kUsage;
}

}  // namespace lensremap::cli
