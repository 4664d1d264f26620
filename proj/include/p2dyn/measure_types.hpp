#pragma once

#include <unordered_map>

#include "p2dyn/projgeom.hpp"

namespace p2dyn {

struct WeightedAtom {
    ProjPoint p;
    double w = 0;
};

// weighted atom cloud on the projective plane; atoms with identical
// quantized coordinates (1e-13 granularity) are merged on insertion
struct EmpiricalMeasure {
    std::vector<WeightedAtom> atoms;
    std::string label;

    void add(const ProjPoint& p, double w);
    double total_mass() const;
    size_t size() const { return atoms.size(); }

  private:
    std::unordered_map<std::uint64_t, size_t> index_;
};

}  // namespace p2dyn
