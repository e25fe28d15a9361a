#include "qpd/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace qpd {

void GridSpec::validate() const {
  if (n < 8) throw std::invalid_argument("render grid needs at least 8 pixels per side");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw std::invalid_argument("render extent must be positive");
}

double GridSpec::coord(std::size_t k) const {
  return (static_cast<double>(k) - static_cast<double>(n / 2)) * step();
}

FieldGrid hg_field(SpatialMode which, const GridSpec& spec) {
  spec.validate();
  FieldGrid f{spec, std::vector<Complex>(spec.n * spec.n)};
  double peak = 0.0;
  for (std::size_t row = 0; row < spec.n; ++row) {
    const double y = spec.coord(row);
    for (std::size_t col = 0; col < spec.n; ++col) {
      const double x = spec.coord(col);
      const double lobe = which == SpatialMode::h ? x : y;
      const double v = lobe * std::exp(-(x * x + y * y));
      f.values[row * spec.n + col] = v;
      peak = std::max(peak, v * v);
    }
  }
  const double scale = 1.0 / std::sqrt(peak);
  for (auto& v : f.values) v *= scale;
  return f;
}

double PortImage::max_pixel() const { return pixels.empty() ? 0.0 : *std::max_element(pixels.begin(), pixels.end()); }

double PortImage::sum() const { return std::accumulate(pixels.begin(), pixels.end(), 0.0); }

std::array<PortImage, 4> port_images(const Outcome& outcome, const GridSpec& spec) {
  const std::array<FieldGrid, 2> modes{hg_field(SpatialMode::h, spec), hg_field(SpatialMode::v, spec)};
  std::array<PortImage, 4> out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const std::size_t idx = SpinOrbitState::index_of(a, b);
      PortImage& img = out[idx];
      img.alice_bit = a;
      img.bob_bit = b;
      img.n = spec.n;
      img.scale = outcome.probs[idx];
      const FieldGrid& mode = modes[b];
      img.pixels.resize(spec.n * spec.n);
      for (std::size_t k = 0; k < img.pixels.size(); ++k) img.pixels[k] = img.scale * std::norm(mode.values[k]);
    }
  return out;
}

ImageWriteError::ImageWriteError(const std::filesystem::path& path, const std::string& what)
    : std::runtime_error(path.string() + ": " + what), path_(path) {}

std::string encode_pgm(const PortImage& img, double normalization) {
  std::string out = "P5\n" + std::to_string(img.n) + " " + std::to_string(img.n) + "\n255\n";
  out.reserve(out.size() + img.pixels.size());
  for (double v : img.pixels) {
    double level = normalization > 0.0 ? v / normalization * 255.0 : 0.0;
    level = std::clamp(level, 0.0, 255.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(level))));
  }
  return out;
}

void write_image(const PortImage& img, const std::filesystem::path& path, double normalization) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ImageWriteError(path, "cannot open for writing");
  const std::string bytes = encode_pgm(img, normalization);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ImageWriteError(path, "write failed");
}

std::vector<std::filesystem::path> write_port_images(const std::array<PortImage, 4>& images,
                                                     const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ImageWriteError(dir, ec.message());

  double global = 0.0;
  for (const auto& img : images) global = std::max(global, img.max_pixel());

  std::vector<std::filesystem::path> paths;
  for (const auto& img : images) {
    paths.push_back(dir / ("port_" + img.port_label() + ".pgm"));
    write_image(img, paths.back(), global);
  }
  return paths;
}

}  // namespace qpd
