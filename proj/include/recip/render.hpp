#pragma once

#include "recip/equidist.hpp"

#include <string>
#include <vector>

namespace recip {

struct RenderOptions {
  long double xmin = -1, xmax = 1; // half-plane window
  long double ymin = 0, ymax = 2;
  int width = 800;                 // pixels; height follows the aspect ratio
  double strokeWidth = 1.0;
  int colorSeed = 0;
  bool labels = false;
  std::string comment; // embedded verbatim (provenance)
};

// window around the closed domain, capped at ymax = top of the finite part + 1
template <class S> RenderOptions defaultView(const GroupPreset<S> &g);

template <class S>
std::string renderSVG(const GroupPreset<S> &g, const std::vector<ArcDecomposition<S>> &classes,
                      const RenderOptions &opt, const std::vector<std::string> &labels = {});

void writeFile(const std::string &path, const std::string &text);

} // namespace recip
