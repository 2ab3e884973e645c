#pragma once

#include <memory>
#include <optional>

#include "tdual/ups/bimodule.hpp"

namespace tdual {

/// Everything built from one spec: the models of G and L, the bimodule
/// between them and, for GL specs with a second stage Q, the model of the
/// smaller Levi J together with the bimodules J -> L and J -> G.
struct Setting {
  struct Stage {
    Composition levi;
    ModelPtr j;
    std::shared_ptr<const UpsBimodule> inner;
    std::shared_ptr<const UpsBimodule> glued;
  };

  GroupSpec spec;
  ModelPtr g;
  ModelPtr l;
  std::shared_ptr<const UpsBimodule> ups;
  std::optional<Stage> stage;
};

inline Setting build_setting(GroupSpec spec) {
  Setting s;
  s.g = build_model(spec);
  s.l = build_levi_model(spec);
  if (spec.is_table()) {
    s.ups = std::make_shared<const UpsBimodule>(s.g, s.l, links_from_specs(*s.g, *s.l, spec.table().ups));
  } else {
    const auto& gl = spec.gl();
    const Composition whole({gl.n});
    s.ups = std::make_shared<const UpsBimodule>(s.g, s.l, gl::links(*s.g, whole, *s.l, gl.parabolic));
    if (!gl.stage.empty()) {
      Setting::Stage st;
      st.levi = glue_parabolic(gl.stage, gl.parabolic);
      st.j = gl::model(gl, st.levi, "J");
      st.inner = std::make_shared<const UpsBimodule>(s.l, st.j, gl::links(*s.l, gl.parabolic, *st.j, st.levi));
      st.glued = std::make_shared<const UpsBimodule>(s.g, st.j, gl::links(*s.g, whole, *st.j, st.levi));
      s.stage = std::move(st);
    }
  }
  s.spec = std::move(spec);
  return s;
}

inline MinimalShapeReport minimal_parabolic_shape(const Setting& s) {
  auto r = minimal_parabolic_shape(*s.ups);
  r.proper = s.spec.is_table() || s.spec.gl().parabolic.blocks() > 1;
  return r;
}

}  // namespace tdual
