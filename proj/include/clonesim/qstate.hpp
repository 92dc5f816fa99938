// Labeled tensor-product Hilbert spaces: sparse state vectors, operators,
// density matrices and the handful of operations the protocol needs on them.
//
// A Space is an ordered list of subsystems, each with a finite alphabet of
// level names. Subsystems are kept sorted by id, so two spaces built from the
// same subsystems in any order compare equal. A BasisLabel stores one level
// index per subsystem, aligned with that canonical order.

#pragma once

#include <complex>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace clonesim {

using cplx = std::complex<double>;

struct Subsystem {
    std::string id;
    std::vector<std::string> levels;

    friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

using BasisLabel = std::vector<int>;
using LabelFactors = std::vector<std::pair<std::string, std::string>>;

class Space {
 public:
    Space() = default;
    explicit Space(std::vector<Subsystem> subsystems);

    std::size_t size() const { return subsystems_.size(); }
    bool empty() const { return subsystems_.empty(); }
    const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }
    const std::vector<Subsystem>& subsystems() const { return subsystems_; }

    std::optional<std::size_t> find(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id).has_value(); }
    // Throws UnknownSubsystem.
    std::size_t index_of(std::string_view id) const;
    int level_index(std::size_t subsystem, std::string_view level) const;
    std::set<std::string> ids() const;
    std::size_t dimension() const;

    bool is_valid(const BasisLabel& label) const;
    BasisLabel label(std::initializer_list<std::pair<std::string_view, std::string_view>> factors) const;
    BasisLabel label(const LabelFactors& factors) const;
    LabelFactors factors(const BasisLabel& label) const;
    std::string to_string(const BasisLabel& label) const;

    // Restriction to the listed ids (all must be present).
    Space restrict_to(const std::set<std::string>& keep) const;

    friend bool operator==(const Space&, const Space&) = default;

 private:
    std::vector<Subsystem> subsystems_;
};

// Union of two spaces with no shared ids; throws CompositionError otherwise.
Space merge_disjoint(const Space& a, const Space& b);
// Union of two spaces; shared ids must have identical alphabets.
Space merge_compatible(const Space& a, const Space& b);

// All basis labels of the space in lexicographic (canonical) order.
std::vector<BasisLabel> enumerate_basis(const Space& space);

// Re-index `label` of `from` into the subsystem order of `to` (which must
// contain every subsystem of `from`); subsystems of `to` not present in
// `from` take level index `fill`.
BasisLabel embed_label(const Space& from, const BasisLabel& label, const Space& to, int fill = 0);
BasisLabel sub_label(const Space& from, const BasisLabel& label, const Space& to);

class StateVector {
 public:
    StateVector() = default;
    explicit StateVector(Space space) : space_(std::move(space)) {}
    StateVector(Space space, std::map<BasisLabel, cplx> amps);

    static StateVector basis(const Space& space,
                             std::initializer_list<std::pair<std::string_view, std::string_view>> factors);
    static StateVector basis(const Space& space, const BasisLabel& label);

    const Space& space() const { return space_; }
    const std::map<BasisLabel, cplx>& amplitudes() const { return amps_; }
    cplx amplitude(const BasisLabel& label) const;
    cplx amplitude(std::initializer_list<std::pair<std::string_view, std::string_view>> factors) const;
    double norm2() const;
    double norm() const;
    bool is_subnormalized(double slack = 1e-12) const { return norm2() <= 1.0 + slack; }

    StateVector operator-() const;
    friend StateVector operator+(const StateVector& a, const StateVector& b);
    friend StateVector operator-(const StateVector& a, const StateVector& b);
    friend StateVector operator*(cplx c, const StateVector& s);

 private:
    Space space_;
    std::map<BasisLabel, cplx> amps_;
};

using MatrixEntries = std::map<std::pair<BasisLabel, BasisLabel>, cplx>;

// Sparse operator over its own (possibly partial) space. When applied to a
// larger state it acts as identity on the remaining subsystems.
class LinearOperator {
 public:
    LinearOperator() = default;
    explicit LinearOperator(Space space) : space_(std::move(space)) {}
    LinearOperator(Space space, MatrixEntries entries);

    static LinearOperator identity(const Space& space);
    static LinearOperator outer(const StateVector& ket, const StateVector& bra);
    // |to><from| on a single subsystem.
    static LinearOperator transition(const Subsystem& sub, std::string_view to, std::string_view from);
    // Bosonic ladder operators on a mode whose levels are "0","1",...; the
    // creation operator is truncated at the top of the alphabet.
    static LinearOperator annihilation(const Subsystem& mode);
    static LinearOperator creation(const Subsystem& mode);
    static LinearOperator number(const Subsystem& mode);

    const Space& space() const { return space_; }
    const MatrixEntries& entries() const { return entries_; }
    cplx entry(const BasisLabel& row, const BasisLabel& col) const;

    LinearOperator adjoint() const;
    friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
    friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b);
    friend LinearOperator operator*(cplx c, const LinearOperator& op);
    // Operator product a*b on the union of the two spaces.
    friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);

 private:
    Space space_;
    MatrixEntries entries_;
};

// Tensor an operator with identity up to `target`.
LinearOperator extend(const LinearOperator& op, const Space& target);

class DensityMatrix {
 public:
    DensityMatrix() = default;
    explicit DensityMatrix(Space space) : space_(std::move(space)) {}
    DensityMatrix(Space space, MatrixEntries entries);

    static DensityMatrix from_pure(const StateVector& s);

    const Space& space() const { return space_; }
    const MatrixEntries& entries() const { return entries_; }
    cplx entry(const BasisLabel& row, const BasisLabel& col) const;
    cplx trace() const;
    bool is_hermitian(double tol = 1e-12) const;
    double min_eigenvalue() const;

    friend DensityMatrix operator+(const DensityMatrix& a, const DensityMatrix& b);
    friend DensityMatrix operator*(double w, const DensityMatrix& rho);

 private:
    Space space_;
    MatrixEntries entries_;
};

StateVector tensor(const StateVector& a, const StateVector& b);
cplx inner(const StateVector& a, const StateVector& b);
StateVector apply(const LinearOperator& op, const StateVector& s);

DensityMatrix partial_trace(const StateVector& s, const std::set<std::string>& keep);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<std::string>& keep);

// <target|rho|target>, clipped to [0,1].
double fidelity_pure(const DensityMatrix& rho, const StateVector& target);

struct Normalized {
    StateVector state;
    double probability;  // squared norm before normalization
};
Normalized normalize(const StateVector& s, double floor = 1e-14);

// <level|_id s: removes subsystem `id` by projecting it onto `level`.
StateVector project_out(const StateVector& s, std::string_view id, std::string_view level);

// Rename subsystems (alphabets unchanged). The result is re-sorted.
StateVector rename_subsystems(const StateVector& s, const std::map<std::string, std::string>& renames);

// Global-phase-insensitive comparison: |<a|b>|.
double overlap_modulus(const StateVector& a, const StateVector& b);

Eigen::VectorXcd to_dense(const StateVector& s, const std::vector<BasisLabel>& basis);
Eigen::MatrixXcd to_dense(const LinearOperator& op, const std::vector<BasisLabel>& basis);
Eigen::MatrixXcd to_dense(const DensityMatrix& rho, const std::vector<BasisLabel>& basis);

}  // namespace clonesim
