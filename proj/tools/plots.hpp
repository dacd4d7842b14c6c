#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace kppca::cli {

struct Layer {
  std::string color;
  double radius;
  Eigen::MatrixXd points;  // 2 x n
  std::string label;
};

// Scatter plot of the layers, drawn in order, with a legend.
void write_svg(const std::filesystem::path& path, const std::vector<Layer>& layers);

// Tiles square images (one per column, values in [0, 1]) into a binary PGM.
void write_pgm_grid(const std::filesystem::path& path, const Eigen::MatrixXd& images, int side,
                    int columns);

// Side length when d is a perfect square of at least 2x2, else 0.
int image_side(Eigen::Index d);

}  // namespace kppca::cli
