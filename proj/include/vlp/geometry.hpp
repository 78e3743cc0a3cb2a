#pragma once

#include <array>
#include <cmath>

#include "vlp/errors.hpp"

namespace vlp {

// Counter-clockwise rotation angles around the x, y and z axes, in radians.
// theta_x, theta_y in (-pi/2, pi/2); theta_z in [0, 2*pi).
struct RotationAngles {
  double theta_x = 0.0;
  double theta_y = 0.0;
  double theta_z = 0.0;

  bool parallel() const { return theta_x == 0.0 && theta_y == 0.0; }
};

// Row-major 3x3 rotation matrix.
struct RotationMatrix {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int row, int col) const { return m[3 * row + col]; }
  double& operator()(int row, int col) { return m[3 * row + col]; }

  RotationMatrix transposed() const;
};

struct WorldPoint {
  double x = 0.0, y = 0.0, z = 0.0;
};

struct CameraPoint {
  double x = 0.0, y = 0.0, z = 0.0;
};

// Image-plane coordinates in millimetres.
struct ImagePoint {
  double x = 0.0, y = 0.0;
};

// Pixel coordinates; continuous unless produced with quantization enabled.
struct PixelPoint {
  double u = 0.0, v = 0.0;
};

enum class Quantization { None, HalfInteger, Integer };

// Camera parameters. f and the pixel pitches share the same length unit
// (mm here); u0/v0 and the resolution are in pixels. beta is the isotropic
// pixel quantization error variance scale E[ee^T] = beta*I.
struct CameraIntrinsics {
  double f = 2.4;
  double s_x = 1.675e-3;
  double s_y = 1.675e-3;
  double u0 = 1280.0;
  double v0 = 768.0;
  int width = 2560;
  int height = 1536;
  double fov = 1.5707963267948966;  // radians
  double beta = 1.7857;

  double f_px() const { return f / s_x; }

  // Pixel size normalized to 1 while f keeps its numeric value. This is the
  // normalization the error-metric experiments run under; the simulator keeps
  // physical units.
  CameraIntrinsics npem_normalized() const {
    CameraIntrinsics c = *this;
    c.s_x = 1.0;
    c.s_y = 1.0;
    return c;
  }

  // Pixel-size sweep: scales both pitches, keeps the optics fixed.
  CameraIntrinsics scaled_pixels(double factor) const {
    CameraIntrinsics c = *this;
    c.s_x *= factor;
    c.s_y *= factor;
    return c;
  }
};

// Camera pose: CCS origin in the WCS plus the WCS->CCS rotation angles.
struct CameraPose {
  WorldPoint center;
  RotationAngles angles;
};

// R = Rx(theta_x) * Ry(theta_y) * Rz(theta_z).
RotationMatrix rotation_matrix(const RotationAngles& angles);

// [X Y Z]^T = R * (p - pose.center).
CameraPoint world_to_camera(const WorldPoint& p, const CameraPose& pose);

// Inverse of world_to_camera: R^T * p + center.
WorldPoint camera_to_world(const CameraPoint& p, const CameraPose& pose);

// Pinhole projection x^I = f*X/Z, y^I = f*Y/Z. Throws DegenerateDepth at Z=0.
ImagePoint camera_to_image(const CameraPoint& p, const CameraIntrinsics& intr);

// ICS -> PCS: u = Q[x^I/s_x] + u0 with Q applied to the centered coordinate.
// HalfInteger maps to the center of the containing pixel, floor(x) + 0.5,
// which is what measured pixel data uses; Integer rounds to the nearest
// pixel index.
PixelPoint image_to_pixel(const ImagePoint& p, const CameraIntrinsics& intr,
                          Quantization q);

double quantize_coord(double x, Quantization q);

// Full WCS -> PCS chain. The sensor sees the real (inverted) image, so the
// projected pixel satisfies (u - u0)*s_x = -f*B/A with A,B,C the rotated
// offsets; an LED with A <= 0 is behind the camera and is rejected.
PixelPoint project_world_to_pixel(const WorldPoint& led, const CameraPose& pose,
                                  const CameraIntrinsics& intr, Quantization q);

// Residuals of the two projection-chain constraint lines,
//   (u - u0)*s_x*A + f*B  and  (v - v0)*s_y*A + f*C,
// used as the round-trip oracle for unquantized projections.
std::array<double, 2> projection_residual(const PixelPoint& px, const WorldPoint& led,
                                          const CameraPose& pose,
                                          const CameraIntrinsics& intr);

}  // namespace vlp
