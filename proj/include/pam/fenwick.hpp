#pragma once
#include <cstdint>
#include <vector>

namespace pam {

/// Fenwick tree over 1-based slots holding integer degrees of "active"
/// vertices. Slot weight is degree + delta when active and 0 otherwise, so the
/// prefix weights stay monotone for any admissible delta.
class DegreeFenwick {
public:
    DegreeFenwick() = default;
    DegreeFenwick(int n, double delta) : n_(n), delta_(delta), deg_(n + 1, 0), cnt_(n + 1, 0) {
        log_ = 1;
        while ((log_ << 1) <= n_) log_ <<= 1;
    }

    int size() const { return n_; }
    double delta() const { return delta_; }

    void activate(int i, std::int64_t degree) {
        add_raw(i, degree, 1);
    }
    void add_degree(int i, std::int64_t d) { add_raw(i, d, 0); }

    /// Sum of slot weights over [1, i].
    double prefix(int i) const {
        std::int64_t d = 0, c = 0;
        for (; i > 0; i -= i & -i) {
            d += deg_[i];
            c += cnt_[i];
        }
        return static_cast<double>(d) + static_cast<double>(c) * delta_;
    }
    double total() const { return prefix(n_); }

    /// Smallest index i with prefix(i) > x, for 0 <= x < total().
    int find(double x) const {
        int pos = 0;
        for (int step = log_; step > 0; step >>= 1) {
            int nxt = pos + step;
            if (nxt <= n_) {
                double w = static_cast<double>(deg_[nxt]) + static_cast<double>(cnt_[nxt]) * delta_;
                if (w <= x) {
                    x -= w;
                    pos = nxt;
                }
            }
        }
        // guard against rounding at the right edge
        if (pos >= n_) pos = n_ - 1;
        return pos + 1;
    }

private:
    void add_raw(int i, std::int64_t d, int c) {
        for (; i <= n_; i += i & -i) {
            deg_[i] += d;
            cnt_[i] += c;
        }
    }

    int n_ = 0;
    int log_ = 1;
    double delta_ = 0.0;
    std::vector<std::int64_t> deg_;
    std::vector<std::int32_t> cnt_;
};

}  // namespace pam
