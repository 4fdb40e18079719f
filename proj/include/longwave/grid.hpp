#ifndef LONGWAVE_GRID_HPP
#define LONGWAVE_GRID_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace longwave {

// Uniform periodic grid on [0, L).  N must be even so the real-transform
// spectrum has a well-defined (real-only) Nyquist mode.
class Grid1D {
public:
    Grid1D(double length, int num_points)
        : length_(length), n_(num_points) {
        if (!(length > 0.0))
            throw std::invalid_argument("Grid1D: length must be positive");
        if (num_points < 8 || num_points % 2 != 0)
            throw std::invalid_argument("Grid1D: N must be even and >= 8");
    }

    double length() const { return length_; }
    int size() const { return n_; }
    double dx() const { return length_ / n_; }
    double node(int j) const { return j * dx(); }
    int num_modes() const { return n_ / 2 + 1; }
    // physical wavenumber of nonnegative mode index m in [0, N/2]
    double wavenumber(int m) const { return 2.0 * M_PI * m / length_; }

    friend bool operator==(const Grid1D& a, const Grid1D& b) {
        return a.length_ == b.length_ && a.n_ == b.n_;
    }
    friend bool operator!=(const Grid1D& a, const Grid1D& b) { return !(a == b); }

private:
    double length_;
    int n_;
};

// Real-valued field sampled at the nodes of a Grid1D.  Value semantics.
class RealField {
public:
    explicit RealField(const Grid1D& grid)
        : grid_(grid), v_(static_cast<std::size_t>(grid.size()), 0.0) {}

    RealField(const Grid1D& grid, std::vector<double> values)
        : grid_(grid), v_(std::move(values)) {
        if (static_cast<int>(v_.size()) != grid.size())
            throw std::invalid_argument("RealField: value count != grid size");
    }

    template <class F>
    static RealField sample(const Grid1D& grid, F&& f) {
        RealField out(grid);
        for (int j = 0; j < grid.size(); ++j) out[j] = f(grid.node(j));
        return out;
    }

    const Grid1D& grid() const { return grid_; }
    int size() const { return static_cast<int>(v_.size()); }
    double& operator[](int j) { return v_[static_cast<std::size_t>(j)]; }
    double operator[](int j) const { return v_[static_cast<std::size_t>(j)]; }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& values() { return v_; }

    bool all_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    RealField& operator+=(const RealField& o) { return zip(o, [](double a, double b) { return a + b; }); }
    RealField& operator-=(const RealField& o) { return zip(o, [](double a, double b) { return a - b; }); }
    RealField& operator*=(const RealField& o) { return zip(o, [](double a, double b) { return a * b; }); }
    RealField& operator*=(double s) {
        for (double& x : v_) x *= s;
        return *this;
    }
    RealField& operator+=(double s) {
        for (double& x : v_) x += s;
        return *this;
    }

    friend RealField operator+(RealField a, const RealField& b) { return a += b; }
    friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
    friend RealField operator*(RealField a, const RealField& b) { return a *= b; }
    friend RealField operator*(double s, RealField a) { return a *= s; }
    friend RealField operator*(RealField a, double s) { return a *= s; }
    friend RealField operator-(RealField a) { return a *= -1.0; }

private:
    template <class Op>
    RealField& zip(const RealField& o, Op op) {
        if (grid_ != o.grid_)
            throw std::invalid_argument("RealField: grid mismatch");
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] = op(v_[i], o.v_[i]);
        return *this;
    }

    Grid1D grid_;
    std::vector<double> v_;
};

// The two small parameters of the long-wave regime: relative amplitude
// eps = a/h0 and long-wave parameter mu = h0^2/lambda^2, with eps = O(mu).
struct ModelParams {
    double eps;
    double mu;

    ModelParams(double eps_, double mu_) : eps(eps_), mu(mu_) {
        if (!(mu > 0.0 && mu <= 0.25))
            throw std::invalid_argument("ModelParams: require 0 < mu <= 0.25");
        if (!(eps > 0.0 && eps <= 2.0 * mu))
            throw std::invalid_argument("ModelParams: require 0 < eps <= 2*mu");
    }
};

}  // namespace longwave

#endif  // LONGWAVE_GRID_HPP
