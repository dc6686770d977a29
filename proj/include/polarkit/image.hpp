#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace polarkit {

/// Row-major single-channel image.
template <typename T>
class Plane {
public:
    Plane() = default;

    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        assert(width >= 0 && height >= 0);
    }

    static Plane from_data(int width, int height, std::vector<T> data) {
        assert(data.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
        Plane p;
        p.width_ = width;
        p.height_ = height;
        p.data_ = std::move(data);
        return p;
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int x, int y) {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }
    const T& at(int x, int y) const {
        assert(x >= 0 && x < width_ && y >= 0 && y < height_);
        return data_[static_cast<std::size_t>(y) * width_ + x];
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool same_shape(const Plane& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    Plane crop(int x0, int y0, int w, int h) const {
        assert(x0 >= 0 && y0 >= 0 && x0 + w <= width_ && y0 + h <= height_);
        Plane out(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                out.at(x, y) = at(x0 + x, y0 + y);
            }
        }
        return out;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

/// Planar Stokes image: one plane per parameter, all the same shape.
struct StokesImage {
    Plane<double> s0;
    Plane<double> s1;
    Plane<double> s2;

    int width() const { return s0.width(); }
    int height() const { return s0.height(); }

    StokesImage crop(int x0, int y0, int w, int h) const {
        return {s0.crop(x0, y0, w, h), s1.crop(x0, y0, w, h), s2.crop(x0, y0, w, h)};
    }
};

/// The four polarizer-angle sub-images of one frame, all the same shape.
struct QuadImage {
    Plane<double> i0;
    Plane<double> i45;
    Plane<double> i90;
    Plane<double> i135;

    int width() const { return i0.width(); }
    int height() const { return i0.height(); }

    QuadImage crop(int x0, int y0, int w, int h) const {
        return {i0.crop(x0, y0, w, h), i45.crop(x0, y0, w, h),
                i90.crop(x0, y0, w, h), i135.crop(x0, y0, w, h)};
    }
};

} // namespace polarkit
