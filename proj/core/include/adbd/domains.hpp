#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "adbd/field.hpp"
#include "adbd/mixture.hpp"
#include "adbd/spectral_field.hpp"

namespace adbd {

using DomainSpec = std::variant<GaussianMixture, SpectralField>;

struct DomainPair {
    std::string name;
    DomainSpec source;
    DomainSpec target;
    std::vector<std::size_t> shape;

    void validate() const;
};

std::vector<std::size_t> domain_shape(const DomainSpec& spec);
bool is_image_domain(const DomainSpec& spec);

// Deterministic in (spec, count, seed); the i-th draw depends only on
// (spec, seed, i).
std::vector<Field> sample_domain(const DomainSpec& spec, std::size_t count, std::uint64_t seed);
double domain_log_density(const DomainSpec& spec, const Field& x);

// Two three-component mixtures in the plane with disjoint supports.
DomainPair default_gmm_pair();

// Texture kinds accepted by make_texture_pair.
const std::vector<std::string>& texture_kinds();

// Source: smooth low-frequency blobs. Target: high-frequency texture of the
// given kind ("stripes", "checker", "speckle"); the seed picks orientation
// and band centre. size must be a power of two >= 16.
DomainPair make_texture_pair(const std::string& kind, std::size_t size, std::uint64_t seed);

}  // namespace adbd
