#include "vlp/geometry.hpp"

#include <cmath>

namespace vlp {

RotationMatrix RotationMatrix::transposed() const {
  RotationMatrix t;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) t(r, c) = (*this)(c, r);
  return t;
}

RotationMatrix rotation_matrix(const RotationAngles& a) {
  const double cx = std::cos(a.theta_x), sx = std::sin(a.theta_x);
  const double cy = std::cos(a.theta_y), sy = std::sin(a.theta_y);
  const double cz = std::cos(a.theta_z), sz = std::sin(a.theta_z);
  // Rx*Ry*Rz expanded.
  RotationMatrix r;
  r(0, 0) = cy * cz;
  r(0, 1) = -cy * sz;
  r(0, 2) = sy;
  r(1, 0) = cx * sz + sx * sy * cz;
  r(1, 1) = cx * cz - sx * sy * sz;
  r(1, 2) = -sx * cy;
  r(2, 0) = sx * sz - cx * sy * cz;
  r(2, 1) = sx * cz + cx * sy * sz;
  r(2, 2) = cx * cy;
  return r;
}

CameraPoint world_to_camera(const WorldPoint& p, const CameraPose& pose) {
  const RotationMatrix r = rotation_matrix(pose.angles);
  const double dx = p.x - pose.center.x;
  const double dy = p.y - pose.center.y;
  const double dz = p.z - pose.center.z;
  return {r(0, 0) * dx + r(0, 1) * dy + r(0, 2) * dz,
          r(1, 0) * dx + r(1, 1) * dy + r(1, 2) * dz,
          r(2, 0) * dx + r(2, 1) * dy + r(2, 2) * dz};
}

WorldPoint camera_to_world(const CameraPoint& p, const CameraPose& pose) {
  const RotationMatrix r = rotation_matrix(pose.angles);
  return {r(0, 0) * p.x + r(1, 0) * p.y + r(2, 0) * p.z + pose.center.x,
          r(0, 1) * p.x + r(1, 1) * p.y + r(2, 1) * p.z + pose.center.y,
          r(0, 2) * p.x + r(1, 2) * p.y + r(2, 2) * p.z + pose.center.z};
}

ImagePoint camera_to_image(const CameraPoint& p, const CameraIntrinsics& intr) {
  if (p.z == 0.0) throw DegenerateDepth("camera_to_image: Z = 0");
  return {intr.f * p.x / p.z, intr.f * p.y / p.z};
}

double quantize_coord(double x, Quantization q) {
  switch (q) {
    case Quantization::None: return x;
    case Quantization::HalfInteger: return std::floor(x) + 0.5;
    case Quantization::Integer: return std::round(x);
  }
  return x;
}

PixelPoint image_to_pixel(const ImagePoint& p, const CameraIntrinsics& intr,
                          Quantization q) {
  return {quantize_coord(p.x / intr.s_x, q) + intr.u0,
          quantize_coord(p.y / intr.s_y, q) + intr.v0};
}

PixelPoint project_world_to_pixel(const WorldPoint& led, const CameraPose& pose,
                                  const CameraIntrinsics& intr, Quantization q) {
  const CameraPoint c = world_to_camera(led, pose);
  if (c.z == 0.0) throw DegenerateDepth("project_world_to_pixel: A_i = 0");
  if (c.z < 0.0) throw BehindCamera("project_world_to_pixel: LED behind camera");
  // Real image on the sensor: point reflection of the virtual image through
  // the principal point.
  const ImagePoint img = camera_to_image(c, intr);
  return image_to_pixel({-img.x, -img.y}, intr, q);
}

std::array<double, 2> projection_residual(const PixelPoint& px, const WorldPoint& led,
                                          const CameraPose& pose,
                                          const CameraIntrinsics& intr) {
  const CameraPoint c = world_to_camera(led, pose);  // (B, C, A)
  return {(px.u - intr.u0) * intr.s_x * c.z + intr.f * c.x,
          (px.v - intr.v0) * intr.s_y * c.z + intr.f * c.y};
}

}  // namespace vlp
