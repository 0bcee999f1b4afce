#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twofusion/group.hpp"
#include "twofusion/twogroup.hpp"

namespace twofusion::fusion {

using grp::ContextPtr;
using grp::Element;
using grp::Group;
using grp::GroupPtr;
using grp::Subgroup;

// Subgroups of the Sylow group are sorted index vectors into its element list.
using SIndexSet = std::vector<std::uint16_t>;

// A conjugation-induced homomorphism between subgroups of S, stored by its
// full graph: images[i] is the S-index of the image of the i-th element of
// the (sorted) domain. The witness realizes the map by conjugation in the
// fusion system's element context.
struct Morphism {
  std::uint16_t domain = 0;
  std::uint16_t codomain = 0;
  std::vector<std::uint16_t> images;
  Element witness;

  bool operator<(const Morphism &o) const { return images < o.images; }
  bool operator==(const Morphism &o) const { return images == o.images; }
};

struct MorphismSet {
  std::uint16_t domain = 0;
  std::uint16_t codomain = 0;
  std::vector<Morphism> maps; // sorted by image vector, deduplicated
};

struct IsoCertificate {
  std::vector<Element> generators; // of S1
  std::vector<Element> images;     // in S2
  std::size_t verified_pairs = 0;
};

enum class IsoResult { Yes, No, Indeterminate };

struct IsoOutcome {
  IsoResult result = IsoResult::Indeterminate;
  std::optional<IsoCertificate> certificate;
  std::string reason; // invariant that failed, or search note
};

// The fusion category of a finite group over a Sylow 2-subgroup: subgroup
// index, conjugacy (fusion) classes of elements and subgroups, and lazily
// computed morphism sets. Factor systems share the interface.
class FusionData : public std::enable_shared_from_this<FusionData> {
public:
  virtual ~FusionData() = default;

  const ContextPtr &ctx() const { return ctx_; }
  const std::vector<Element> &sylow_elements() const { return s_; }
  std::size_t sylow_order() const { return s_.size(); }
  std::uint16_t element_index(const Element &e) const;
  const std::string &descriptor() const { return descriptor_; }

  const std::vector<SIndexSet> &subgroups() const { return subs_; }
  std::uint16_t subgroup_index(const SIndexSet &elems) const;
  std::uint16_t whole_subgroup() const { return whole_id_; }
  std::uint16_t trivial_subgroup() const { return trivial_id_; }
  std::uint16_t cyclic_subgroup_of(std::uint16_t elem_idx) const;

  // fusion classes of elements of S
  std::uint16_t element_class(std::uint16_t elem_idx) const { return eclass_[elem_idx]; }
  std::size_t element_class_count() const { return eclass_count_; }
  // fusion classes of subgroups
  std::uint32_t subgroup_class(std::uint16_t sub_idx) const { return sclass_[sub_idx]; }

  // the complete conjugation-induced morphism set, cached per pair
  const MorphismSet &hom_set(std::uint16_t p, std::uint16_t q) const;

  struct InvolutionClasses {
    std::vector<std::vector<std::uint16_t>> classes; // element indices
  };
  InvolutionClasses involution_classes() const;

  bool is_strongly_closed(const SIndexSet &a) const;
  SIndexSet focal_subgroup() const;
  SIndexSet hyperfocal_subgroup() const;
  SIndexSet fusion_center() const;
  bool is_nilpotent() const;

  // factor system modulo a normal subgroup of S
  std::shared_ptr<FusionData> factor_system(const SIndexSet &q) const;

  // group-realized data, when present
  virtual GroupPtr ambient() const { return nullptr; }

  // the inner fusion system F_S(S) on the same Sylow group
  std::shared_ptr<FusionData> inner_fusion() const;

  SIndexSet index_set_of(const std::vector<Element> &elems) const;
  std::vector<Element> elements_of(const SIndexSet &s) const;

protected:
  virtual MorphismSet compute_hom(std::uint16_t p, std::uint16_t q) const = 0;
  // fill eclass_/sclass_; default: generic union-find over morphism images
  virtual void classify();
  void init_index(ContextPtr ctx, std::vector<Element> sylow_elems,
                  std::string descriptor);
  void generic_element_classes();
  void generic_subgroup_classes();

  ContextPtr ctx_;
  std::vector<Element> s_;
  std::map<Element, std::uint16_t> sidx_;
  std::string descriptor_;
  std::vector<SIndexSet> subs_;
  std::map<SIndexSet, std::uint16_t> sub_idx_;
  std::uint16_t whole_id_ = 0, trivial_id_ = 0;
  std::vector<std::uint16_t> eclass_;
  std::size_t eclass_count_ = 0;
  std::vector<std::uint32_t> sclass_;
  mutable std::map<std::pair<std::uint16_t, std::uint16_t>, MorphismSet> hom_cache_;
  mutable std::shared_ptr<FusionData> inner_cache_;
};

using FusionPtr = std::shared_ptr<FusionData>;

// F_S(G) for an enumerated group and a Sylow 2-subgroup (found by growth if
// absent). Errors if S is not Sylow (even index or not closed).
FusionPtr build_fusion(GroupPtr g, std::optional<Subgroup> s = std::nullopt,
                       std::uint64_t sylow_cap = 1u << 9);

// Isomorphism of fusion systems: searches group isomorphisms S1 -> S2 by
// generator images with invariant pruning, then verifies the Hom-set
// transport equation on every subgroup pair. Indeterminate is reported only
// when the candidate cap is hit before exhausting the search space.
IsoOutcome is_isomorphic(const FusionData &f1, const FusionData &f2,
                         std::size_t candidate_cap = 1000000);

// Re-verify a certificate from scratch (group isomorphism + all pairs).
bool verify_certificate(const FusionData &f1, const FusionData &f2,
                        const IsoCertificate &cert);

std::string certificate_to_json(const FusionData &f1, const FusionData &f2,
                                const IsoCertificate &cert);
IsoCertificate certificate_from_json(const FusionData &f1, const std::string &json_text);

} // namespace twofusion::fusion
