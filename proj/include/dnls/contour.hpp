#pragma once

#include "dnls/common.hpp"

#include <map>

#include "json.hpp"

namespace dnls {

enum class ArcKind { Segment, Ray, Circular, Elliptical };

// One smooth oriented piece. Every piece is parameterized by s in [-1, 1] in
// the direction of travel. Segments, rays and circular arcs use a Mobius map
// M(s) = (a s + b)/(c s + d); elliptical arcs are angle-linear.
struct Arc {
    ArcKind kind = ArcKind::Segment;
    cplx z0, z1;               // segment ends; ray: finite end z0 and unit direction z1 (away from z0)
    bool inward = false;       // ray traversed from infinity towards z0
    cplx center;
    double radius = 0, rx = 0, ry = 0;
    double th0 = 0, th1 = 0;   // start/end angle (circle, ellipse), th1 < th0 means clockwise
    double scale = 1;          // ray map scale L
    int n = 64;                // collocation nodes
    std::string left, right;   // region names on the left (+) and right (-) side
    std::string name;

    cplx at(cplx s) const;
    cplx dz(cplx s) const;      // dM/ds
    cplx inverse(cplx z) const; // Mobius kinds only
    cplx start() const;         // finite or infinite start: infinite returns NaN
    cplx end() const;
    bool start_finite() const { return !(kind == ArcKind::Ray && inward); }
    bool end_finite() const { return !(kind == ArcKind::Ray && !inward); }
    bool mobius() const { return kind != ArcKind::Elliptical; }
    // parameter of the point at infinity (rays), or of the Mobius pole otherwise
    cplx pole_param() const;
    void mobius_coeffs(cplx& a, cplx& b, cplx& c, cplx& d) const;
    Arc reversed() const;
    RVec params() const; // Lobatto points in s
    std::vector<cplx> points() const;
};

struct Incidence {
    int arc;
    bool incoming;   // node is the arc's end point
    double angle;    // direction leaving the node along the arc
};

struct Node {
    cplx z;
    std::vector<Incidence> inc; // counter-clockwise by angle
};

enum class ContourKind { Zeta, Lambda, Modified };

struct ContourGraph {
    ContourKind kind = ContourKind::Lambda;
    double R = 1, S_inf = 1;
    std::vector<Arc> arcs;
    std::vector<Node> nodes;
    std::map<std::string, int> region_sign; // +1 / -1

    int total_points() const;
    // label of the region containing z (nearest-piece side test)
    std::string region_at(cplx z) const;
    int sign_at(cplx z) const { return region_sign.at(region_at(z)); }
    // face two-colouring check: throws std::logic_error with a reason on failure
    bool complete(std::string* why = nullptr) const;
    int node_of(cplx z) const;
    void build_nodes(); // detect intersections among finite endpoints
};

ContourGraph build_zeta_contour(double R, int n_bounded = 64, int n_ray = 96);
ContourGraph build_lambda_contour(double S_inf, int n_bounded = 64, int n_ray = 96);
ContourGraph build_modified_contour(double S_inf, double ax, double ay, int n_bounded = 64, int n_ray = 96);

// Node layout for the lambda contour. With Lambda1 > S_inf each real ray is
// split at +-Lambda1 into a segment (n_near nodes, resolves oscillation) and a
// mapped tail ray (n_tail nodes, scale Lambda1).
struct LambdaLayout {
    int n_segment = 64, n_arc = 64;
    int n_near = 0, n_tail = 96;
    double Lambda1 = 0;
};
ContourGraph build_lambda_contour(double S_inf, const LambdaLayout& lay);
// ellipse semi-axes (S_inf, ay)
ContourGraph build_modified_contour(double S_inf, double ay, const LambdaLayout& lay);

// one-sided limits of f and its derivatives at a node, per incident arc
struct NodeTrace {
    cplx node;
    std::vector<Incidence> inc;
    std::vector<std::vector<cplx>> f; // f[i][j] = j-th derivative on incident arc i
    std::vector<int> sector_sign;     // sign of the sector between inc[i] and inc[i+1] (ccw)
};

// trace of per-arc samples (values at the arc's Lobatto points) at node k
NodeTrace node_trace(const ContourGraph& g, int node, const std::vector<CVec>& samples, int k);
double check_zero_sum(const NodeTrace& t, int k);
double check_matching_pm(const NodeTrace& t, int side, int k);

nlohmann::json to_json(const ContourGraph& g);
ContourGraph contour_from_json(const nlohmann::json& j);

} // namespace dnls
