#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toolforge/geometry.hpp"
#include "toolforge/superquadric.hpp"

namespace toolforge {

enum class AttachmentKind { magnet, other };
enum class Polarity { north, south };

/// A location on a part where a fixed connection can be made. The location
/// is expressed in the same frame as the part's point cloud.
struct AttachmentPoint {
  std::string part_id;
  Eigen::Vector3d location = Eigen::Vector3d::Zero();
  AttachmentKind kind = AttachmentKind::magnet;
  std::optional<Polarity> polarity;  // simulation only; hidden from scoring
};

/// Known attachment points per part. A part that is absent from the map has
/// unknown attachments; a part mapped to an empty list is known to have none.
struct AttachmentLibrary {
  std::map<std::string, std::vector<AttachmentPoint>> entries;

  bool knows(const std::string& part_id) const {
    return entries.count(part_id) > 0;
  }

  const std::vector<AttachmentPoint>* find(const std::string& part_id) const {
    const auto it = entries.find(part_id);
    return it == entries.end() ? nullptr : &it->second;
  }
};

/// One component of the reference tool, in the assembled tool frame.
struct ReferenceComponent {
  PointCloud cloud;
  SuperquadricParams sq;
};

/// Ordered component tuple (r_1 .. r_m) of the tool to reproduce.
struct ReferenceTool {
  std::vector<ReferenceComponent> components;

  std::size_t m() const { return components.size(); }
};

/// One scene part available for construction, in its own frame.
struct CandidatePart {
  std::string id;
  PointCloud cloud;
  SuperquadricParams sq;
  std::optional<std::vector<AttachmentPoint>> attachments;
};

}  // namespace toolforge
