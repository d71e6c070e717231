#include "helmres/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace helmres {
namespace {

template <int N>
Rule from_boost() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    Rule r;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            r.x.push_back(0.5);
            r.w.push_back(0.5 * w[i]);
        } else {
            r.x.push_back(0.5 - 0.5 * a[i]);
            r.w.push_back(0.5 * w[i]);
            r.x.push_back(0.5 + 0.5 * a[i]);
            r.w.push_back(0.5 * w[i]);
        }
    }
    std::vector<std::size_t> idx(r.x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return r.x[i] < r.x[j]; });
    Rule s;
    for (auto i : idx) {
        s.x.push_back(r.x[i]);
        s.w.push_back(r.w[i]);
    }
    return s;
}

Rule make_rule(int n) {
    switch (n) {
        case 1: return Rule{{0.5}, {1.0}};
        case 2: return from_boost<2>();
        case 3: return from_boost<3>();
        case 4: return from_boost<4>();
        case 5: return from_boost<5>();
        case 6: return from_boost<6>();
        case 7: return from_boost<7>();
        case 8: return from_boost<8>();
        case 9: return from_boost<9>();
        case 10: return from_boost<10>();
        case 12: return from_boost<12>();
        case 15: return from_boost<15>();
        case 16: return from_boost<16>();
        case 20: return from_boost<20>();
        case 25: return from_boost<25>();
        case 30: return from_boost<30>();
        case 40: return from_boost<40>();
        default: throw std::invalid_argument("unsupported Gauss order " + std::to_string(n));
    }
}

std::mutex cache_mutex;

}  // namespace

const Rule& gauss_legendre(int n) {
    static std::map<int, Rule> cache;
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

const Rule& gauss_cos(int n) {
    static std::map<int, Rule> cache;
    const Rule& g = gauss_legendre(n);
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    constexpr double pi = std::numbers::pi;
    Rule r;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
        r.x.push_back(0.5 * (1.0 - std::cos(pi * g.x[i])));
        r.w.push_back(0.5 * pi * std::sin(pi * g.x[i]) * g.w[i]);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

double composite_gauss(const std::function<double(double)>& f, std::vector<double> breaks, int n) {
    std::sort(breaks.begin(), breaks.end());
    const Rule& g = gauss_legendre(n);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], h = breaks[k + 1] - a;
        if (h <= 0) continue;
        for (std::size_t i = 0; i < g.x.size(); ++i) s += h * g.w[i] * f(a + h * g.x[i]);
    }
    return s;
}

}  // namespace helmres
