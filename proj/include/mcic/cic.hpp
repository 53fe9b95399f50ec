#pragma once

// Expression trees over the two scalar generators f(s) = 1/s and g(s) = 1,
// closed under positive scaling, summation and inversion, plus arbitrary
// rational-matrix leaves. Evaluation folds the tree through the rational
// arithmetic layer; sampling produces seeded random trees for property tests.

#include <memory>
#include <vector>

#include "mcic/rational.hpp"

namespace mcic {

enum class CicKind { GeneratorF, GeneratorG, Leaf, Scale, Sum, Inverse };

struct CicNode;
using CicNodePtr = std::shared_ptr<const CicNode>;

struct CicNode {
  CicKind kind = CicKind::GeneratorG;
  double scale = 1.0;               // Scale nodes only; must be > 0
  RationalMatrix leaf;              // Leaf nodes only
  std::vector<CicNodePtr> children;
};

struct CicExpression {
  int m = 1;  // evaluation size: generators lift to (1/s) I_m and I_m
  CicNodePtr root;
};

inline CicNodePtr cic_f() {
  auto n = std::make_shared<CicNode>();
  n->kind = CicKind::GeneratorF;
  return n;
}

inline CicNodePtr cic_g() {
  auto n = std::make_shared<CicNode>();
  n->kind = CicKind::GeneratorG;
  return n;
}

inline CicNodePtr cic_leaf(RationalMatrix value) {
  auto n = std::make_shared<CicNode>();
  n->kind = CicKind::Leaf;
  n->leaf = std::move(value);
  return n;
}

inline CicNodePtr cic_scale(double c, CicNodePtr child) {
  require(c > 0.0, "cic_scale: scale factor must be strictly positive");
  require(child != nullptr, "cic_scale: null child");
  auto n = std::make_shared<CicNode>();
  n->kind = CicKind::Scale;
  n->scale = c;
  n->children.push_back(std::move(child));
  return n;
}

inline CicNodePtr cic_sum(std::vector<CicNodePtr> children) {
  require(children.size() >= 2, "cic_sum: needs at least two summands");
  for (const CicNodePtr& c : children) require(c != nullptr, "cic_sum: null child");
  auto n = std::make_shared<CicNode>();
  n->kind = CicKind::Sum;
  n->children = std::move(children);
  return n;
}

inline CicNodePtr cic_inverse(CicNodePtr child) {
  require(child != nullptr, "cic_inverse: null child");
  auto n = std::make_shared<CicNode>();
  n->kind = CicKind::Inverse;
  n->children.push_back(std::move(child));
  return n;
}

namespace detail {

inline RationalMatrix cic_eval_node(const CicNode& node, int m) {
  switch (node.kind) {
    case CicKind::GeneratorF:
      return RationalMatrix::scalar_lift(Rational::variable().reciprocal(), m);
    case CicKind::GeneratorG:
      return RationalMatrix::identity(m);
    case CicKind::Leaf:
      require(node.leaf.size() == m, "cic_eval: leaf size mismatch");
      return node.leaf;
    case CicKind::Scale:
      return rf_scale(node.scale, cic_eval_node(*node.children[0], m));
    case CicKind::Sum: {
      RationalMatrix acc = cic_eval_node(*node.children[0], m);
      for (size_t k = 1; k < node.children.size(); ++k) {
        acc = rf_add(acc, cic_eval_node(*node.children[k], m));
      }
      return acc;
    }
    case CicKind::Inverse:
      return rf_invert(cic_eval_node(*node.children[0], m));
  }
  throw Error("cic_eval: unknown node kind");
}

}  // namespace detail

inline RationalMatrix cic_eval(const CicExpression& e) {
  require(e.root != nullptr, "cic_eval: empty expression");
  require(e.m >= 1, "cic_eval: size must be positive");
  return detail::cic_eval_node(*e.root, e.m);
}

inline int cic_node_count(const CicNodePtr& node) {
  if (!node) return 0;
  int n = 1;
  for (const CicNodePtr& c : node->children) n += cic_node_count(c);
  return n;
}

namespace detail {

inline CicNodePtr cic_sample_node(Rng& rng, int depth) {
  if (depth <= 0) {
    return rng.uniform() < 0.5 ? cic_f() : cic_g();
  }
  double u = rng.uniform();
  if (u < 0.25) {
    return rng.uniform() < 0.5 ? cic_f() : cic_g();
  }
  if (u < 0.50) {
    return cic_scale(rng.log_uniform(1e-2, 1e2), cic_sample_node(rng, depth - 1));
  }
  if (u < 0.80) {
    std::vector<CicNodePtr> kids;
    kids.push_back(cic_sample_node(rng, depth - 1));
    kids.push_back(cic_sample_node(rng, depth - 1));
    return cic_sum(std::move(kids));
  }
  return cic_inverse(cic_sample_node(rng, depth - 1));
}

}  // namespace detail

// Seeded random expression tree over the two generators; identical seeds give
// identical trees.
inline CicExpression cic_sample(int depth, std::uint64_t seed, int m = 1) {
  require(depth >= 0, "cic_sample: depth must be non-negative");
  require(m >= 1, "cic_sample: size must be positive");
  Rng rng(seed);
  CicExpression e;
  e.m = m;
  e.root = detail::cic_sample_node(rng, depth);
  return e;
}

}  // namespace mcic
