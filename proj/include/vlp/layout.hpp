#pragma once

#include <span>
#include <string>
#include <vector>

#include "vlp/geometry.hpp"
#include "vlp/parallel.hpp"

namespace vlp {

struct RoomSpec {
  double width = 5.0;
  double length = 5.0;
  double height = 3.0;
  double led_height = 2.75;
};

enum class CellKind { Square, Hexagonal, Triangular, RectangularNonUniform, Free };

std::string to_string(CellKind kind);
CellKind cell_kind_from_string(const std::string& name);

// Nearest-neighbour LED spacing of a unit-density cell layout, scaled to the
// requested density: 1 m (square), sqrt(2/sqrt(3)) m (hexagonal cells ->
// triangular point lattice), 2*sqrt(1/(3*sqrt(3))) m (triangular cells ->
// honeycomb point lattice).
double lattice_spacing(CellKind kind, double density);

struct LedLayout {
  CellKind kind = CellKind::Square;
  double density = 1.0;
  std::vector<WorldPoint> leds;
};

// Finite-room layout, clipped to [0,width] x [0,length] (closed bounds).
// The square lattice is offset half a spacing from the room origin (LEDs at
// (i-0.5, j-0.5) for unit density in a 5 m room); hexagonal and triangular
// lattices are anchored with an LED at the room centre, one lattice direction
// along x.
LedLayout generate_room_layout(CellKind kind, const RoomSpec& room, double density);

// Infinite tiling: all lattice sites within `radius` of the anchor (closed
// disc), at height z. Same lattice phases as the room generator, with the
// anchor taking the room-centre role.
LedLayout generate_infinite_layout(CellKind kind, double density,
                                   const WorldPoint& anchor, double radius);

struct CaptureResult {
  std::vector<std::size_t> indices;
  std::size_t count = 0;
  double radius = 0.0;  // disc radius d_tr*tan(FOV/2); parallel poses only
};

// An LED is captured iff it lies in front of the camera (positive depth along
// the optical axis) and the angle between the optical axis and the direction
// to the LED is at most FOV/2. For theta_x = theta_y = 0 this is exactly the
// closed-disc test with r = d_tr*tan(FOV/2).
std::vector<std::size_t> captured_indices(std::span<const WorldPoint> leds,
                                          const CameraPose& pose,
                                          const CameraIntrinsics& intr);

CaptureResult captured_leds(const LedLayout& layout, const CameraPose& pose,
                            const CameraIntrinsics& intr);

// Capture count per receiver point at the horizontal pose (angles all zero).
std::vector<std::pair<WorldPoint, std::size_t>> capture_count_map(
    const LedLayout& layout, std::span<const WorldPoint> receivers,
    const CameraIntrinsics& intr, Exec exec = Exec::Parallel);

std::string layout_to_json(const LedLayout& layout);
LedLayout layout_from_json(const std::string& text);

}  // namespace vlp
