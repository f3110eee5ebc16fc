#include "fplab/commutators.hpp"

#include "fplab/spectral.hpp"

namespace fplab {

const char* to_string(CommutatorKind k) {
  switch (k) {
    case CommutatorKind::R: return "r";
    case CommutatorKind::R1: return "r1";
    case CommutatorKind::R2: return "r2";
    case CommutatorKind::S: return "s";
    case CommutatorKind::S1: return "s1";
  }
  return "unknown";
}

CommutatorKind commutator_kind_from_string(const std::string& name) {
  for (auto k : {CommutatorKind::R, CommutatorKind::R1, CommutatorKind::R2, CommutatorKind::S,
                 CommutatorKind::S1}) {
    if (name == to_string(k)) return k;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown commutator kind '" + name + "'");
}

namespace {

CommutatorField wrap(CommutatorKind kind, const Mollifier& m, ScalarField f) {
  CommutatorField c;
  c.kind = kind;
  c.delta = m.delta();
  c.family = m.family();
  c.slices.push_back(std::move(f));
  return c;
}

ScalarField dot(const VectorField& u, const VectorField& v) {
  ScalarField s(u.grid());
  for (int i = 0; i < u.dim(); ++i) s += hadamard(u[i], v[i]);
  return s;
}

VectorField scaled(const VectorField& v, const ScalarField& f) {
  std::vector<ScalarField> c;
  for (int i = 0; i < v.dim(); ++i) c.push_back(hadamard(v[i], f));
  return VectorField(std::move(c));
}

void check_inputs(const Grid& g, const ScalarField& w, const Mollifier& m, const char* ctx) {
  require_same_grid(g, w.grid(), ctx);
  require_same_grid(g, m.grid(), ctx);
  w.require_finite(ctx);
}

}  // namespace

RSplit commutator_r(const VectorField& b, const ScalarField& w, const Mollifier& m) {
  check_inputs(b.grid(), w, m, "commutator_r");
  const ScalarField wd = mollify(w, m);
  const ScalarField divb = divergence(b);
  ScalarField r = divergence(scaled(b, wd)) - mollify(divergence(scaled(b, w)), m);
  ScalarField r1 = dot(b, gradient(wd)) - mollify(dot(b, gradient(w)), m);
  ScalarField r2 = hadamard(wd, divb) - mollify(hadamard(w, divb), m);
  return {wrap(CommutatorKind::R, m, std::move(r)), wrap(CommutatorKind::R1, m, std::move(r1)),
          wrap(CommutatorKind::R2, m, std::move(r2))};
}

CommutatorField commutator_s(const MatrixField& a, const ScalarField& w, const Mollifier& m) {
  check_inputs(a.grid(), w, m, "commutator_s");
  const ScalarField wd = mollify(w, m);
  const int d = a.dim();
  ScalarField rough(a.grid()), smooth(a.grid());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      rough += partial(partial(hadamard(a(i, j), w), j), i);
      smooth += partial(partial(hadamard(a(i, j), wd), j), i);
    }
  }
  return wrap(CommutatorKind::S, m, mollify(rough, m) - smooth);
}

CommutatorField commutator_s1(const MatrixField& a, const ScalarField& w, const Mollifier& m) {
  check_inputs(a.grid(), w, m, "commutator_s1");
  const VectorField gw = gradient(w);
  const VectorField gwd = gradient(mollify(w, m));
  const int d = a.dim();
  ScalarField out(a.grid());
  for (int i = 0; i < d; ++i) {
    ScalarField flux(a.grid());
    for (int j = 0; j < d; ++j) {
      flux += hadamard(a(i, j), gwd[j]) - mollify(hadamard(a(i, j), gw[j]), m);
    }
    out += partial(flux, i);
  }
  return wrap(CommutatorKind::S1, m, std::move(out));
}

ScalarField s1_limit(const MatrixField& a, const ScalarField& w) {
  require_same_grid(a.grid(), w.grid(), "s1_limit");
  const VectorField gw = gradient(w);
  const int d = a.dim();
  ScalarField out(a.grid());
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) out -= hadamard(gw[j], partial(a(i, j), i));
  }
  return out;
}

CommutatorField kernel_form_r(const VectorField& b, const ScalarField& w, const Mollifier& m) {
  check_inputs(b.grid(), w, m, "kernel_form_r");
  const Grid& g = b.grid();
  const int d = g.dim();
  const VectorField gw = gradient(w);
  ScalarField out(g);
  for (std::size_t x = 0; x < g.size(); ++x) {
    double acc = 0.0;
    for (const auto& e : m.stencil()) {
      std::size_t y = x;
      for (int a = 0; a < d; ++a) y = g.neighbor(y, a, -e.offset[a]);
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += (b[i][x] - b[i][y]) * gw[i][y];
      acc += e.weight * s;
    }
    out[x] = acc;
  }
  return wrap(CommutatorKind::R1, m, std::move(out));
}

CommutatorField commutator_series(CommutatorKind kind, const CoefficientSet& c,
                                  const ScalarField& w, const Mollifier& m) {
  CommutatorField out;
  for (int k = 0; k < c.slices(); ++k) {
    CommutatorField one;
    switch (kind) {
      case CommutatorKind::R: one = commutator_r(c.b(k), w, m).r; break;
      case CommutatorKind::R1: one = commutator_r(c.b(k), w, m).r1; break;
      case CommutatorKind::R2: one = commutator_r(c.b(k), w, m).r2; break;
      case CommutatorKind::S: one = commutator_s(c.a(k), w, m); break;
      case CommutatorKind::S1: one = commutator_s1(c.a(k), w, m); break;
    }
    if (k == 0) out = one;
    else out.slices.push_back(std::move(one.slices.front()));
  }
  return out;
}

}  // namespace fplab
