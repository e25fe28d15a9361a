#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpd/game.hpp"
#include "qpd/qmath.hpp"

namespace qpd {

/// Sampling of the transverse plane in waist units.
///
/// Pixel (row, col) sits at x = (col − n/2)·dx, y = (row − n/2)·dx with
/// dx = 2·extent/n, so the optical axis always falls on a grid node.
struct GridSpec {
  std::size_t n = 256;
  double extent = 3.0;

  void validate() const;
  double step() const { return 2.0 * extent / static_cast<double>(n); }
  double coord(std::size_t k) const;
};

struct FieldGrid {
  GridSpec spec;
  /// n×n samples, row-major (row = y, column = x).
  std::vector<Complex> values;

  const Complex& at(std::size_t row, std::size_t col) const { return values[row * spec.n + col]; }
  double intensity(std::size_t row, std::size_t col) const { return std::norm(at(row, col)); }
};

enum class SpatialMode { h, v };

/// First-order Hermite-Gaussian profile at the waist (w = 1): ψ_h ∝ x·e^{−r²},
/// ψ_v ∝ y·e^{−r²}. Scaled so the brightest sample has intensity 1.
FieldGrid hg_field(SpatialMode which, const GridSpec& spec = {});

struct PortImage {
  int alice_bit = 0;
  int bob_bit = 0;
  std::size_t n = 0;
  std::vector<double> pixels;
  /// p(m, n) weight applied to the unit-peak mode image.
  double scale = 0.0;

  std::string port_label() const { return std::string(kPortLabels[2 * alice_bit + bob_bit]); }
  double max_pixel() const;
  double sum() const;
};

/// One CCD-style image per output port (CC, CD, DC, DD). The polarization bit
/// picks the port; the spatial bit picks which HG profile lights it up.
std::array<PortImage, 4> port_images(const Outcome& outcome, const GridSpec& spec = {});

class ImageWriteError : public std::runtime_error {
 public:
  ImageWriteError(const std::filesystem::path& path, const std::string& what);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Binary PGM (P5), 8-bit, linear map [0, normalization] → [0, 255].
/// A non-positive normalization writes an all-zero payload.
void write_image(const PortImage& img, const std::filesystem::path& path, double normalization);

/// Encoded PGM bytes; what write_image puts on disk.
std::string encode_pgm(const PortImage& img, double normalization);

/// Writes `port_<m><n>.pgm` for all four ports into `dir`, normalized to the
/// brightest pixel across the set. Returns the written paths.
std::vector<std::filesystem::path> write_port_images(const std::array<PortImage, 4>& images,
                                                     const std::filesystem::path& dir);

}  // namespace qpd
