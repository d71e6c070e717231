#pragma once
#include <functional>
#include <vector>

namespace helmres {

// Gauss-Legendre rule on [0,1]
struct Rule {
    std::vector<double> x, w;
};

const Rule& gauss_legendre(int n);

// Same rule pulled towards both endpoints by t = (1 - cos(pi u)) / 2.
// Turns sqrt/log endpoint behaviour into something Gauss can digest.
const Rule& gauss_cos(int n);

// Fixed-rule composite integration on [a,b] split at the given breakpoints.
double composite_gauss(const std::function<double(double)>& f, std::vector<double> breaks,
                       int n);

}  // namespace helmres
