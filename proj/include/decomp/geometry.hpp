#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace decomp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ||A|| = max_{|x|=1} |Ax|. Closed form for 1x1 and 2x2, power iteration on A^T A otherwise.
double spectral_norm(const Mat& a);

struct Ball {
  Vec center;
  double radius = 1;
};

// Open shell inner < |x| < outer around the origin.
struct Annulus {
  double inner = 0;
  double outer = 1;
};

struct Box {
  Vec lo;
  Vec hi;
};

// Planar cone section {(x, y) : x in (x_lo, x_hi), y / x in (slope_lo, slope_hi)}, x_lo >= 0.
struct ConeSection {
  double x_lo = 0;
  double x_hi = 1;
  double slope_lo = -1;
  double slope_hi = 1;
};

using BaseSet = std::variant<Ball, Annulus, Box, ConeSection>;

std::string describe(const BaseSet& q);
nlohmann::json base_set_to_json(const BaseSet& q);
BaseSet base_set_from_json(const nlohmann::json& j, int dim);

double sup_norm(const BaseSet& q);
bool contains_ball(const BaseSet& q, const Vec& center, double eps);

struct RadialImage {
  Vec center;
  double inner = 0;  // 0 with solid = true means a ball
  double outer = 0;
  bool solid = true;
};
struct BoxImage {
  Vec lo, hi;
};
struct PolygonImage {
  std::vector<Eigen::Vector2d> vertices;  // convex, counter-clockwise
};
struct HullImage {
  Vec center;
  double radius = 0;
};

// T * Q' + b, in the most exact representation available.
struct Image {
  std::variant<RadialImage, BoxImage, PolygonImage, HullImage> shape;
  Vec bb_lo, bb_hi;
  bool approximate = false;  // true when only a bounding ball is known
};

Image image_of(const Mat& t, const Vec& b, const BaseSet& q);
double image_sup_norm(const Image& img);

struct Overlap {
  bool intersects = false;
  bool conservative = false;
};

// Intersection test of the open sets; exact for radial/box/polygon pairs of the same kind.
Overlap intersect(const Image& a, const Image& b);

}  // namespace decomp
