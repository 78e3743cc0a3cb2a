#include "vlp/layout.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

namespace vlp {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kEps = 1e-12;

struct Vec2 {
  double x, y;
};

Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Basis for the point lattice behind each cell layout. `basis` holds the
// offsets of the points inside one Bravais cell.
struct Lattice {
  Vec2 a1, a2;
  std::vector<Vec2> basis;
};

Lattice make_lattice(CellKind kind, double density) {
  const double spacing = lattice_spacing(kind, density);
  switch (kind) {
    case CellKind::Square:
      return {{spacing, 0.0}, {0.0, spacing}, {{0.0, 0.0}}};
    case CellKind::Hexagonal:
      // Hexagonal cells: centroids form a triangular lattice, a1 along x.
      return {{spacing, 0.0},
              {spacing / 2.0, spacing * kSqrt3 / 2.0},
              {{0.0, 0.0}}};
    case CellKind::Triangular: {
      // Triangular cells: centroids form a honeycomb (two-point basis), with
      // the nearest-neighbour bond direction along x.
      const double side = spacing * kSqrt3;  // triangle edge length
      const double rot = M_PI / 6.0;
      return {rotate({side, 0.0}, rot),
              rotate({side / 2.0, side * kSqrt3 / 2.0}, rot),
              {{0.0, 0.0}, rotate({side / 2.0, side / (2.0 * kSqrt3)}, rot)}};
    }
    default:
      break;
  }
  throw UnsupportedKind("make_lattice: no lattice for this kind");
}

// Emit all lattice sites within `radius` of `anchor` (anchor itself is a
// basis-0 site). Deterministic order: by cell index, then basis index.
std::vector<WorldPoint> lattice_disc(const Lattice& lat, Vec2 anchor,
                                     double radius, double z) {
  const double cell = std::min(std::hypot(lat.a1.x, lat.a1.y),
                               std::hypot(lat.a2.x, lat.a2.y));
  const long range = static_cast<long>(std::ceil(radius / cell)) * 2 + 2;
  std::vector<WorldPoint> out;
  for (long i = -range; i <= range; ++i) {
    for (long j = -range; j <= range; ++j) {
      for (const Vec2& b : lat.basis) {
        const double x = anchor.x + i * lat.a1.x + j * lat.a2.x + b.x;
        const double y = anchor.y + i * lat.a1.y + j * lat.a2.y + b.y;
        if (std::hypot(x - anchor.x, y - anchor.y) <= radius + kEps)
          out.push_back({x, y, z});
      }
    }
  }
  return out;
}

}  // namespace

std::string to_string(CellKind kind) {
  switch (kind) {
    case CellKind::Square: return "square";
    case CellKind::Hexagonal: return "hexagonal";
    case CellKind::Triangular: return "triangular";
    case CellKind::RectangularNonUniform: return "rectangular-nonuniform";
    case CellKind::Free: return "free";
  }
  return "?";
}

CellKind cell_kind_from_string(const std::string& name) {
  if (name == "square") return CellKind::Square;
  if (name == "hexagonal" || name == "hex") return CellKind::Hexagonal;
  if (name == "triangular" || name == "tri") return CellKind::Triangular;
  if (name == "rectangular-nonuniform") return CellKind::RectangularNonUniform;
  if (name == "free") return CellKind::Free;
  throw UnsupportedKind("unknown cell layout kind: " + name);
}

double lattice_spacing(CellKind kind, double density) {
  if (density <= 0.0) throw ConfigError("lattice_spacing: density must be > 0");
  const double unit_area = 1.0 / density;  // area per LED
  switch (kind) {
    case CellKind::Square:
      return std::sqrt(unit_area);
    case CellKind::Hexagonal:
      // hexagon area (sqrt(3)/2) d^2 = unit_area
      return std::sqrt(2.0 * unit_area / kSqrt3);
    case CellKind::Triangular:
      // triangle area (3*sqrt(3)/4) t^2 = unit_area
      return 2.0 * std::sqrt(unit_area / (3.0 * kSqrt3));
    default:
      break;
  }
  throw UnsupportedKind("lattice_spacing: no nominal spacing for this kind");
}

LedLayout generate_room_layout(CellKind kind, const RoomSpec& room, double density) {
  if (density <= 0.0) throw ConfigError("generate_room_layout: density must be > 0");
  LedLayout layout{kind, density, {}};
  const double z = room.led_height;
  if (kind == CellKind::Square) {
    const double a = lattice_spacing(kind, density);
    for (long i = 0; (i + 0.5) * a <= room.width + kEps; ++i)
      for (long j = 0; (j + 0.5) * a <= room.length + kEps; ++j)
        layout.leds.push_back({(i + 0.5) * a, (j + 0.5) * a, z});
    return layout;
  }
  const Lattice lat = make_lattice(kind, density);
  const Vec2 centre{room.width / 2.0, room.length / 2.0};
  const double radius = std::hypot(room.width, room.length) / 2.0 + kEps;
  for (const WorldPoint& p : lattice_disc(lat, centre, radius, z)) {
    if (p.x >= -kEps && p.x <= room.width + kEps && p.y >= -kEps &&
        p.y <= room.length + kEps)
      layout.leds.push_back(p);
  }
  return layout;
}

LedLayout generate_infinite_layout(CellKind kind, double density,
                                   const WorldPoint& anchor, double radius) {
  if (density <= 0.0) throw ConfigError("generate_infinite_layout: density must be > 0");
  LedLayout layout{kind, density, {}};
  if (kind == CellKind::Square) {
    // Same half-spacing phase as the room generator, extended to the plane.
    const double a = lattice_spacing(kind, density);
    const long range = static_cast<long>(std::ceil(radius / a)) + 2;
    const long ci = static_cast<long>(std::floor(anchor.x / a));
    const long cj = static_cast<long>(std::floor(anchor.y / a));
    for (long i = ci - range; i <= ci + range; ++i) {
      for (long j = cj - range; j <= cj + range; ++j) {
        const double x = (i + 0.5) * a;
        const double y = (j + 0.5) * a;
        if (std::hypot(x - anchor.x, y - anchor.y) <= radius + kEps)
          layout.leds.push_back({x, y, anchor.z});
      }
    }
    return layout;
  }
  const Lattice lat = make_lattice(kind, density);
  layout.leds = lattice_disc(lat, {anchor.x, anchor.y}, radius, anchor.z);
  return layout;
}

std::vector<std::size_t> captured_indices(std::span<const WorldPoint> leds,
                                          const CameraPose& pose,
                                          const CameraIntrinsics& intr) {
  const RotationMatrix r = rotation_matrix(pose.angles);
  const double cos_half = std::cos(intr.fov / 2.0);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < leds.size(); ++i) {
    const double dx = leds[i].x - pose.center.x;
    const double dy = leds[i].y - pose.center.y;
    const double dz = leds[i].z - pose.center.z;
    const double zc = r(2, 0) * dx + r(2, 1) * dy + r(2, 2) * dz;
    if (zc <= 0.0) continue;
    const double norm = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (zc >= cos_half * norm) out.push_back(i);
  }
  return out;
}

CaptureResult captured_leds(const LedLayout& layout, const CameraPose& pose,
                            const CameraIntrinsics& intr) {
  CaptureResult res;
  res.indices = captured_indices(layout.leds, pose, intr);
  res.count = res.indices.size();
  if (pose.angles.parallel() && !layout.leds.empty()) {
    const double d_tr = layout.leds.front().z - pose.center.z;
    res.radius = d_tr * std::tan(intr.fov / 2.0);
  }
  return res;
}

std::vector<std::pair<WorldPoint, std::size_t>> capture_count_map(
    const LedLayout& layout, std::span<const WorldPoint> receivers,
    const CameraIntrinsics& intr, Exec exec) {
  std::vector<std::pair<WorldPoint, std::size_t>> out(receivers.size());
  parallel_for(receivers.size(), exec, [&](std::size_t i) {
    const CameraPose pose{receivers[i], {}};
    out[i] = {receivers[i], captured_indices(layout.leds, pose, intr).size()};
  });
  return out;
}

std::string layout_to_json(const LedLayout& layout) {
  nlohmann::json j;
  j["kind"] = to_string(layout.kind);
  j["density"] = layout.density;
  auto& arr = j["leds"] = nlohmann::json::array();
  for (const WorldPoint& p : layout.leds) arr.push_back({p.x, p.y, p.z});
  return j.dump(2);
}

LedLayout layout_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  LedLayout layout;
  layout.kind = cell_kind_from_string(j.at("kind").get<std::string>());
  layout.density = j.at("density").get<double>();
  for (const auto& p : j.at("leds"))
    layout.leds.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                           p.at(2).get<double>()});
  return layout;
}

}  // namespace vlp
