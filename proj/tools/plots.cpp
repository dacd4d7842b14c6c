#include "plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "kppca/errors.hpp"

namespace kppca::cli {

namespace {

constexpr double kSize = 640.0;
constexpr double kMargin = 40.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_svg(const std::filesystem::path& path, const std::vector<Layer>& layers) {
  double lo_x = 0, hi_x = 1, lo_y = 0, hi_y = 1;
  bool first = true;
  for (const auto& layer : layers) {
    for (Eigen::Index j = 0; j < layer.points.cols(); ++j) {
      const double x = layer.points(0, j), y = layer.points(1, j);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (first) {
        lo_x = hi_x = x;
        lo_y = hi_y = y;
        first = false;
      }
      lo_x = std::min(lo_x, x), hi_x = std::max(hi_x, x);
      lo_y = std::min(lo_y, y), hi_y = std::max(hi_y, y);
    }
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-12});
  const double scale = (kSize - 2 * kMargin) / span;
  const auto px = [&](double x) { return kMargin + (x - lo_x) * scale; };
  const auto py = [&](double y) { return kSize - kMargin - (y - lo_y) * scale; };

  std::ofstream out(path);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << ' ' << kSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& layer : layers) {
    out << "<g fill=\"" << layer.color << "\">\n";
    for (Eigen::Index j = 0; j < layer.points.cols(); ++j) {
      const double x = layer.points(0, j), y = layer.points(1, j);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"" << num(layer.radius)
          << "\"/>\n";
    }
    out << "</g>\n";
  }
  double y = 18.0;
  for (const auto& layer : layers) {
    out << "<circle cx=\"12\" cy=\"" << num(y - 4) << "\" r=\"4\" fill=\"" << layer.color << "\"/>"
        << "<text x=\"22\" y=\"" << num(y) << "\" font-size=\"12\" font-family=\"sans-serif\">"
        << layer.label << "</text>\n";
    y += 16.0;
  }
  out << "</svg>\n";
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

void write_pgm_grid(const std::filesystem::path& path, const Eigen::MatrixXd& images, int side,
                    int columns) {
  const int count = static_cast<int>(images.cols());
  columns = std::max(1, std::min(columns, std::max(count, 1)));
  const int rows = std::max(1, (count + columns - 1) / columns);
  const int pad = 1;
  const int width = columns * (side + pad) + pad;
  const int height = rows * (side + pad) + pad;
  std::vector<unsigned char> pixels(static_cast<std::size_t>(width) * height, 0);
  for (int k = 0; k < count; ++k) {
    const int top = pad + (k / columns) * (side + pad);
    const int left = pad + (k % columns) * (side + pad);
    for (int r = 0; r < side; ++r) {
      for (int c = 0; c < side; ++c) {
        double v = images(r * side + c, k);
        v = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
        pixels[static_cast<std::size_t>(top + r) * width + left + c] =
            static_cast<unsigned char>(std::lround(v * 255.0));
      }
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
  if (!out) throw Error(Errc::Io, "failed writing " + path.string());
}

int image_side(Eigen::Index d) {
  const auto side = static_cast<Eigen::Index>(std::lround(std::sqrt(static_cast<double>(d))));
  return side >= 2 && side * side == d ? static_cast<int>(side) : 0;
}

}  // namespace kppca::cli
