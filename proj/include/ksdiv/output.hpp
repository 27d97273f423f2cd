// output.hpp: Deterministic CSV emission (17 significant digits, LF) and the
// 800×800 SVG projection of the eigenvalue-simplex slice.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksdiv::cli {

// ---------------------------------- CSV --------------------------------------

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open output file " + path);
    }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) out_ << ',';
            out_ << cols[i];
        }
        out_ << '\n';
    }

    CsvWriter& field(double v) {
        sep();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out_ << buf;
        return *this;
    }

    CsvWriter& field(int v) {
        sep();
        out_ << v;
        return *this;
    }

    CsvWriter& field(const std::string& v) {
        sep();
        out_ << v;
        return *this;
    }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

  private:
    void sep() {
        if (!first_) out_ << ',';
        first_ = false;
    }

    std::ofstream out_;
    bool first_ = true;
};

// ---------------------------------- SVG --------------------------------------

// Orthonormal in-plane coordinates for the affine slice q1 + q2 + q3 = 1:
// u = (q1 - q2)/sqrt(2), v = (q1 + q2 - 2 q3)/sqrt(6).
struct SlicePoint {
    double u = 0.0, v = 0.0;
};

inline SlicePoint slice_project(double q1, double q2, double q3) {
    return {(q1 - q2) / std::sqrt(2.0), (q1 + q2 - 2.0 * q3) / std::sqrt(6.0)};
}

class SvgCanvas {
  public:
    // world box [u0,u1]×[v0,v1] mapped into an 800×800 viewport, v axis up
    SvgCanvas(double u0, double u1, double v0, double v1)
        : u0_(u0), v1_(v1), scale_(800.0 / std::max(u1 - u0, v1 - v0)) {}

    void polygon(const std::vector<SlicePoint>& pts, const std::string& fill,
                 const std::string& stroke, double stroke_width) {
        body_ << "<polygon points=\"";
        for (const SlicePoint& p : pts) body_ << px(p.u) << ',' << py(p.v) << ' ';
        body_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
              << stroke_width << "\"/>\n";
    }

    void segment(SlicePoint a, SlicePoint b, const std::string& stroke, double stroke_width) {
        body_ << "<line x1=\"" << px(a.u) << "\" y1=\"" << py(a.v) << "\" x2=\"" << px(b.u)
              << "\" y2=\"" << py(b.v) << "\" stroke=\"" << stroke << "\" stroke-width=\""
              << stroke_width << "\"/>\n";
    }

    void dot(SlicePoint p, double r, const std::string& fill) {
        body_ << "<circle cx=\"" << px(p.u) << "\" cy=\"" << py(p.v) << "\" r=\"" << r
              << "\" fill=\"" << fill << "\"/>\n";
    }

    void label(SlicePoint p, const std::string& text, int font_px) {
        body_ << "<text x=\"" << px(p.u) << "\" y=\"" << py(p.v) << "\" font-size=\"" << font_px
              << "\" font-family=\"sans-serif\" text-anchor=\"middle\">" << text << "</text>\n";
    }

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file " + path);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
               "viewBox=\"0 0 800 800\">\n"
               "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n"
            << body_.str() << "</svg>\n";
    }

  private:
    double px(double u) const { return (u - u0_) * scale_; }
    double py(double v) const { return (v1_ - v) * scale_; }

    double u0_, v1_, scale_;
    std::ostringstream body_;
};

// Zero-level segments of a scalar field sampled on a rectangular grid
// (marching squares, linear interpolation along cell edges).  `keep` masks
// cells whose corners are all inside the domain of interest.
struct GridLevelCurve {
    std::vector<std::pair<SlicePoint, SlicePoint>> segments;
};

template <class FieldAt, class PointAt, class KeepAt>
GridLevelCurve march_zero_level(int nx, int ny, FieldAt field, PointAt point, KeepAt keep) {
    GridLevelCurve out;
    auto lerp = [&](int i0, int j0, int i1, int j1) {
        const double f0 = field(i0, j0), f1 = field(i1, j1);
        const double t = (f0 - f1) != 0.0 ? f0 / (f0 - f1) : 0.5;
        const SlicePoint p0 = point(i0, j0), p1 = point(i1, j1);
        return SlicePoint{p0.u + t * (p1.u - p0.u), p0.v + t * (p1.v - p0.v)};
    };
    for (int i = 0; i + 1 < nx; ++i)
        for (int j = 0; j + 1 < ny; ++j) {
            if (!(keep(i, j) && keep(i + 1, j) && keep(i, j + 1) && keep(i + 1, j + 1))) continue;
            const bool s00 = field(i, j) >= 0.0;
            const bool s10 = field(i + 1, j) >= 0.0;
            const bool s01 = field(i, j + 1) >= 0.0;
            const bool s11 = field(i + 1, j + 1) >= 0.0;
            std::vector<SlicePoint> hits;
            if (s00 != s10) hits.push_back(lerp(i, j, i + 1, j));
            if (s10 != s11) hits.push_back(lerp(i + 1, j, i + 1, j + 1));
            if (s01 != s11) hits.push_back(lerp(i, j + 1, i + 1, j + 1));
            if (s00 != s01) hits.push_back(lerp(i, j, i, j + 1));
            if (hits.size() == 2) out.segments.emplace_back(hits[0], hits[1]);
            else if (hits.size() == 4) {  // saddle: pair consistently
                out.segments.emplace_back(hits[0], hits[3]);
                out.segments.emplace_back(hits[1], hits[2]);
            }
        }
    return out;
}

}  // namespace ksdiv::cli
