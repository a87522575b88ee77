#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stereowave/frame.hpp"
#include "stereowave/sphere_geometry.hpp"

namespace stereowave {

//! Write-temp-then-rename; either the whole file appears or nothing does.
void atomic_write(const std::filesystem::path& path, const std::string& content);

//! x,y,z rows, 17 significant digits (lossless round trip).
std::string points_csv(const std::vector<SpherePoint>& points);
std::vector<SpherePoint> parse_points_csv(const std::string& text);

//! x,y,z,value rows.
std::string values_csv(const std::vector<SpherePoint>& points, const Eigen::VectorXd& values);
std::pair<std::vector<SpherePoint>, Eigen::VectorXd> parse_values_csv(const std::string& text);

//! hemisphere,e,j,k1,k2,value rows.
std::string coefficients_csv(const BlockList& blocks);

std::string read_file(const std::filesystem::path& path);

}  // namespace stereowave
