#include "lfhybrid/epi.hpp"

#include <cstring>
#include <stdexcept>

namespace lfhybrid {

Image extract_epi(const LightField& lf, EpiOrientation orientation,
                  int angular_index, int spatial_line) {
  const int C = lf.channels();
  if (orientation == EpiOrientation::horizontal) {
    if (angular_index < 1 || angular_index > lf.rows)
      throw std::out_of_range("angular row index out of range");
    if (spatial_line < 0 || spatial_line >= lf.height())
      throw std::out_of_range("image row index out of range");
    Image epi(C, lf.cols, lf.width());
    for (int v = 1; v <= lf.cols; ++v) {
      const Image& view = lf.view(angular_index, v);
      for (int c = 0; c < C; ++c)
        std::memcpy(epi.row(c, v - 1), view.row(c, spatial_line),
                    sizeof(float) * lf.width());
    }
    return epi;
  }
  if (angular_index < 1 || angular_index > lf.cols)
    throw std::out_of_range("angular column index out of range");
  if (spatial_line < 0 || spatial_line >= lf.width())
    throw std::out_of_range("image column index out of range");
  Image epi(C, lf.rows, lf.height());
  for (int u = 1; u <= lf.rows; ++u) {
    const Image& view = lf.view(u, angular_index);
    for (int c = 0; c < C; ++c)
      for (int y = 0; y < lf.height(); ++y)
        epi.at(c, u - 1, y) = view.at(c, y, spatial_line);
  }
  return epi;
}

}  // namespace lfhybrid
