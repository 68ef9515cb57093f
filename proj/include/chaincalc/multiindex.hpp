#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace chaincalc {

/// Ambient dimensions are small by design; chains in product spaces
/// (Cartesian wedge) stay within this cap.
inline constexpr int kMaxDim = 8;

/// Increasing multi-index over axes 1..n, stored as a bitmask
/// (bit i-1 set <=> axis i present).  The empty index is grade 0.
class MultiIndex {
public:
    constexpr MultiIndex() = default;
    constexpr explicit MultiIndex(std::uint32_t mask) : mask_(mask) {}

    static MultiIndex from_axes(const std::vector<int>& axes) {
        std::uint32_t m = 0;
        for (int a : axes) m |= (1u << (a - 1));
        return MultiIndex(m);
    }
    /// Single axis e_i, 1-based.
    static constexpr MultiIndex axis(int i) { return MultiIndex(1u << (i - 1)); }
    /// Full volume index e_1..e_n.
    static constexpr MultiIndex full(int n) { return MultiIndex((n == 32) ? ~0u : ((1u << n) - 1)); }

    constexpr std::uint32_t mask() const { return mask_; }
    int grade() const { return std::popcount(mask_); }
    bool contains(int axis) const { return mask_ & (1u << (axis - 1)); }
    bool empty() const { return mask_ == 0; }
    int max_axis() const { return mask_ == 0 ? 0 : 32 - std::countl_zero(mask_); }

    std::vector<int> axes() const {
        std::vector<int> out;
        for (std::uint32_t m = mask_; m; m &= m - 1)
            out.push_back(std::countr_zero(m) + 1);
        return out;
    }

    /// Position of axis within the increasing list (0-based); axis must be present.
    int position(int axis) const {
        return std::popcount(mask_ & ((1u << (axis - 1)) - 1));
    }

    MultiIndex with(int axis) const { return MultiIndex(mask_ | (1u << (axis - 1))); }
    MultiIndex without(int axis) const { return MultiIndex(mask_ & ~(1u << (axis - 1))); }
    MultiIndex complement(int n) const { return MultiIndex(full(n).mask() & ~mask_); }

    /// Axes shifted up by `offset` (block embedding for product spaces).
    MultiIndex shifted(int offset) const { return MultiIndex(mask_ << offset); }

    friend constexpr bool operator==(MultiIndex a, MultiIndex b) { return a.mask_ == b.mask_; }
    friend constexpr auto operator<=>(MultiIndex a, MultiIndex b) { return a.mask_ <=> b.mask_; }

    std::string str() const {
        if (mask_ == 0) return "1";
        std::string s = "e";
        for (int a : axes()) s += std::to_string(a);
        return s;
    }

private:
    std::uint32_t mask_ = 0;
};

/// Sign of e_I ^ e_J relative to the increasing merge; 0 if the indices share
/// an axis.  The sign counts the transpositions needed to interleave J into I.
inline int wedge_sign(MultiIndex a, MultiIndex b) {
    if (a.mask() & b.mask()) return 0;
    int swaps = 0;
    for (std::uint32_t m = b.mask(); m; m &= m - 1) {
        int bit = std::countr_zero(m);
        swaps += std::popcount(a.mask() >> (bit + 1));
    }
    return (swaps & 1) ? -1 : 1;
}

/// Sign s such that e_I ^ (s * e_{I^c}) = (-1)^k e_1..n, i.e. the coefficient
/// of the perpendicular complement of e_I on e_{I^c}.
inline int perp_sign(MultiIndex idx, int n) {
    const int k = idx.grade();
    const int s = wedge_sign(idx, idx.complement(n));
    return ((k & 1) ? -s : s);
}

} // namespace chaincalc
