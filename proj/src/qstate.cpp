#include "clonesim/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clonesim/errors.hpp"

namespace clonesim {

namespace {

template <typename Map, typename Key>
void accumulate(Map& m, const Key& key, cplx value) {
    auto [it, inserted] = m.try_emplace(key, value);
    if (!inserted) it->second += value;
}

template <typename Map>
void drop_zeros(Map& m) {
    std::erase_if(m, [](const auto& kv) { return kv.second == cplx{0.0, 0.0}; });
}

void require_same_space(const Space& a, const Space& b, const char* what) {
    if (!(a == b)) throw SpaceMismatch(std::string(what) + ": operands live in different spaces");
}

}  // namespace

// ---------------------------------------------------------------- Space

Space::Space(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
    std::sort(subsystems_.begin(), subsystems_.end(),
              [](const Subsystem& x, const Subsystem& y) { return x.id < y.id; });
    for (std::size_t i = 0; i < subsystems_.size(); ++i) {
        const auto& sub = subsystems_[i];
        if (sub.id.empty()) throw InvalidParameter("subsystem id must be nonempty");
        if (sub.levels.empty()) throw InvalidParameter("subsystem '" + sub.id + "' has an empty alphabet");
        if (i > 0 && subsystems_[i - 1].id == sub.id)
            throw CompositionError("duplicate subsystem id '" + sub.id + "'");
        std::set<std::string> seen(sub.levels.begin(), sub.levels.end());
        if (seen.size() != sub.levels.size())
            throw InvalidParameter("subsystem '" + sub.id + "' repeats a level name");
    }
}

std::optional<std::size_t> Space::find(std::string_view id) const {
    auto it = std::lower_bound(subsystems_.begin(), subsystems_.end(), id,
                               [](const Subsystem& s, std::string_view v) { return s.id < v; });
    if (it == subsystems_.end() || it->id != id) return std::nullopt;
    return static_cast<std::size_t>(it - subsystems_.begin());
}

std::size_t Space::index_of(std::string_view id) const {
    auto i = find(id);
    if (!i) throw UnknownSubsystem("unknown subsystem '" + std::string(id) + "'");
    return *i;
}

int Space::level_index(std::size_t subsystem, std::string_view level) const {
    const auto& lv = subsystems_.at(subsystem).levels;
    auto it = std::find(lv.begin(), lv.end(), level);
    if (it == lv.end())
        throw InvalidParameter("level '" + std::string(level) + "' is not in the alphabet of '" +
                               subsystems_[subsystem].id + "'");
    return static_cast<int>(it - lv.begin());
}

std::set<std::string> Space::ids() const {
    std::set<std::string> out;
    for (const auto& s : subsystems_) out.insert(s.id);
    return out;
}

std::size_t Space::dimension() const {
    std::size_t d = 1;
    for (const auto& s : subsystems_) d *= s.levels.size();
    return d;
}

bool Space::is_valid(const BasisLabel& label) const {
    if (label.size() != subsystems_.size()) return false;
    for (std::size_t i = 0; i < label.size(); ++i)
        if (label[i] < 0 || label[i] >= static_cast<int>(subsystems_[i].levels.size())) return false;
    return true;
}

BasisLabel Space::label(std::initializer_list<std::pair<std::string_view, std::string_view>> factors) const {
    LabelFactors f;
    for (const auto& [id, lv] : factors) f.emplace_back(std::string(id), std::string(lv));
    return label(f);
}

BasisLabel Space::label(const LabelFactors& factors) const {
    BasisLabel out(subsystems_.size(), -1);
    for (const auto& [id, lv] : factors) {
        auto i = index_of(id);
        if (out[i] != -1) throw InvalidParameter("subsystem '" + id + "' given twice in a label");
        out[i] = level_index(i, lv);
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i] == -1) throw InvalidParameter("label is missing subsystem '" + subsystems_[i].id + "'");
    return out;
}

LabelFactors Space::factors(const BasisLabel& label) const {
    LabelFactors out;
    for (std::size_t i = 0; i < subsystems_.size(); ++i)
        out.emplace_back(subsystems_[i].id, subsystems_[i].levels.at(label.at(i)));
    return out;
}

std::string Space::to_string(const BasisLabel& label) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < subsystems_.size(); ++i)
        os << '|' << subsystems_[i].levels.at(label.at(i)) << "⟩_" << subsystems_[i].id;
    return os.str();
}

Space Space::restrict_to(const std::set<std::string>& keep) const {
    std::vector<Subsystem> subs;
    for (const auto& id : keep) subs.push_back(subsystems_[index_of(id)]);
    return Space(std::move(subs));
}

Space merge_disjoint(const Space& a, const Space& b) {
    for (const auto& s : b.subsystems())
        if (a.contains(s.id)) throw CompositionError("subsystem '" + s.id + "' appears in both factors");
    auto subs = a.subsystems();
    subs.insert(subs.end(), b.subsystems().begin(), b.subsystems().end());
    return Space(std::move(subs));
}

Space merge_compatible(const Space& a, const Space& b) {
    auto subs = a.subsystems();
    for (const auto& s : b.subsystems()) {
        if (auto i = a.find(s.id)) {
            if (!(a[*i] == s)) throw SpaceMismatch("subsystem '" + s.id + "' declared with different alphabets");
        } else {
            subs.push_back(s);
        }
    }
    return Space(std::move(subs));
}

std::vector<BasisLabel> enumerate_basis(const Space& space) {
    std::vector<BasisLabel> out;
    BasisLabel cur(space.size(), 0);
    const auto n = space.size();
    while (true) {
        out.push_back(cur);
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (++cur[i] < static_cast<int>(space[i].levels.size())) break;
            cur[i] = 0;
            if (i == 0) return out;
        }
        if (n == 0) return out;
    }
}

BasisLabel embed_label(const Space& from, const BasisLabel& label, const Space& to, int fill) {
    BasisLabel out(to.size(), fill);
    for (std::size_t i = 0; i < from.size(); ++i) out[to.index_of(from[i].id)] = label[i];
    return out;
}

BasisLabel sub_label(const Space& from, const BasisLabel& label, const Space& to) {
    BasisLabel out(to.size());
    for (std::size_t i = 0; i < to.size(); ++i) out[i] = label[from.index_of(to[i].id)];
    return out;
}

// ---------------------------------------------------------- StateVector

StateVector::StateVector(Space space, std::map<BasisLabel, cplx> amps)
    : space_(std::move(space)), amps_(std::move(amps)) {
    for (const auto& [lbl, _] : amps_)
        if (!space_.is_valid(lbl)) throw InvalidParameter("basis label does not belong to the declared space");
    drop_zeros(amps_);
}

StateVector StateVector::basis(const Space& space,
                               std::initializer_list<std::pair<std::string_view, std::string_view>> factors) {
    return StateVector(space, {{space.label(factors), cplx{1.0, 0.0}}});
}

StateVector StateVector::basis(const Space& space, const BasisLabel& label) {
    return StateVector(space, {{label, cplx{1.0, 0.0}}});
}

cplx StateVector::amplitude(const BasisLabel& label) const {
    auto it = amps_.find(label);
    return it == amps_.end() ? cplx{} : it->second;
}

cplx StateVector::amplitude(std::initializer_list<std::pair<std::string_view, std::string_view>> factors) const {
    return amplitude(space_.label(factors));
}

double StateVector::norm2() const {
    double n = 0.0;
    for (const auto& [_, a] : amps_) n += std::norm(a);
    return n;
}

double StateVector::norm() const { return std::sqrt(norm2()); }

StateVector StateVector::operator-() const { return cplx{-1.0, 0.0} * *this; }

StateVector operator+(const StateVector& a, const StateVector& b) {
    require_same_space(a.space(), b.space(), "state sum");
    auto amps = a.amps_;
    for (const auto& [lbl, v] : b.amps_) accumulate(amps, lbl, v);
    return StateVector(a.space_, std::move(amps));
}

StateVector operator-(const StateVector& a, const StateVector& b) { return a + (-b); }

StateVector operator*(cplx c, const StateVector& s) {
    auto amps = s.amps_;
    for (auto& [_, v] : amps) v *= c;
    return StateVector(s.space_, std::move(amps));
}

// ------------------------------------------------------- LinearOperator

LinearOperator::LinearOperator(Space space, MatrixEntries entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
    for (const auto& [rc, _] : entries_)
        if (!space_.is_valid(rc.first) || !space_.is_valid(rc.second))
            throw InvalidParameter("operator entry outside the declared space");
    drop_zeros(entries_);
}

LinearOperator LinearOperator::identity(const Space& space) {
    MatrixEntries e;
    for (const auto& lbl : enumerate_basis(space)) e[{lbl, lbl}] = 1.0;
    return LinearOperator(space, std::move(e));
}

LinearOperator LinearOperator::outer(const StateVector& ket, const StateVector& bra) {
    require_same_space(ket.space(), bra.space(), "outer product");
    MatrixEntries e;
    for (const auto& [r, kv] : ket.amplitudes())
        for (const auto& [c, bv] : bra.amplitudes()) e[{r, c}] = kv * std::conj(bv);
    return LinearOperator(ket.space(), std::move(e));
}

LinearOperator LinearOperator::transition(const Subsystem& sub, std::string_view to, std::string_view from) {
    Space s({sub});
    return LinearOperator(s, {{{BasisLabel{s.level_index(0, to)}, BasisLabel{s.level_index(0, from)}}, 1.0}});
}

namespace {
int occupation_of(const Subsystem& mode, std::size_t level) {
    int n = 0;
    try {
        n = std::stoi(mode.levels[level]);
    } catch (const std::exception&) {
        throw InvalidParameter("mode '" + mode.id + "' has non-numeric occupation labels");
    }
    if (n != static_cast<int>(level))
        throw InvalidParameter("mode '" + mode.id + "' occupations must be 0,1,... in order");
    return n;
}
}  // namespace

LinearOperator LinearOperator::annihilation(const Subsystem& mode) {
    Space s({mode});
    MatrixEntries e;
    for (std::size_t n = 1; n < mode.levels.size(); ++n) {
        const int occ = occupation_of(mode, n);
        e[{BasisLabel{occ - 1}, BasisLabel{occ}}] = std::sqrt(static_cast<double>(occ));
    }
    return LinearOperator(s, std::move(e));
}

LinearOperator LinearOperator::creation(const Subsystem& mode) { return annihilation(mode).adjoint(); }

LinearOperator LinearOperator::number(const Subsystem& mode) {
    Space s({mode});
    MatrixEntries e;
    for (std::size_t n = 1; n < mode.levels.size(); ++n) {
        const int occ = occupation_of(mode, n);
        e[{BasisLabel{occ}, BasisLabel{occ}}] = static_cast<double>(occ);
    }
    return LinearOperator(s, std::move(e));
}

cplx LinearOperator::entry(const BasisLabel& row, const BasisLabel& col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? cplx{} : it->second;
}

LinearOperator LinearOperator::adjoint() const {
    MatrixEntries e;
    for (const auto& [rc, v] : entries_) e[{rc.second, rc.first}] = std::conj(v);
    return LinearOperator(space_, std::move(e));
}

LinearOperator extend(const LinearOperator& op, const Space& target) {
    if (op.space() == target) return op;
    for (const auto& s : op.space().subsystems()) {
        auto i = target.find(s.id);
        if (!i) throw UnknownSubsystem("cannot extend operator: target lacks '" + s.id + "'");
        if (!(target[*i] == s)) throw SpaceMismatch("cannot extend operator: alphabet of '" + s.id + "' differs");
    }
    std::set<std::string> rest_ids;
    for (const auto& s : target.subsystems())
        if (!op.space().contains(s.id)) rest_ids.insert(s.id);
    const Space rest = target.restrict_to(rest_ids);
    const auto rest_basis = enumerate_basis(rest);
    MatrixEntries e;
    for (const auto& [rc, v] : op.entries()) {
        for (const auto& env : rest_basis) {
            BasisLabel r = embed_label(op.space(), rc.first, target);
            BasisLabel c = embed_label(op.space(), rc.second, target);
            for (std::size_t i = 0; i < rest.size(); ++i) {
                const auto k = target.index_of(rest[i].id);
                r[k] = env[i];
                c[k] = env[i];
            }
            e[{r, c}] = v;
        }
    }
    return LinearOperator(target, std::move(e));
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
    const Space u = merge_compatible(a.space(), b.space());
    LinearOperator ea = extend(a, u), eb = extend(b, u);
    auto e = ea.entries_;
    for (const auto& [rc, v] : eb.entries_) accumulate(e, rc, v);
    return LinearOperator(u, std::move(e));
}

LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) { return a + cplx{-1.0, 0.0} * b; }

LinearOperator operator*(cplx c, const LinearOperator& op) {
    auto e = op.entries_;
    for (auto& [_, v] : e) v *= c;
    return LinearOperator(op.space_, std::move(e));
}

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
    const Space u = merge_compatible(a.space(), b.space());
    LinearOperator ea = extend(a, u), eb = extend(b, u);
    MatrixEntries e;
    for (const auto& [rc, va] : ea.entries_) {
        // (a b)_{r c} = sum_k a_{r k} b_{k c}; walk b's entries with row k.
        auto lo = eb.entries_.lower_bound({rc.second, BasisLabel{}});
        for (auto it = lo; it != eb.entries_.end() && it->first.first == rc.second; ++it)
            accumulate(e, std::make_pair(rc.first, it->first.second), va * it->second);
    }
    return LinearOperator(u, std::move(e));
}

// -------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(Space space, MatrixEntries entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
    for (const auto& [rc, _] : entries_)
        if (!space_.is_valid(rc.first) || !space_.is_valid(rc.second))
            throw InvalidParameter("density-matrix entry outside the declared space");
    drop_zeros(entries_);
}

DensityMatrix DensityMatrix::from_pure(const StateVector& s) {
    MatrixEntries e;
    for (const auto& [r, a] : s.amplitudes())
        for (const auto& [c, b] : s.amplitudes()) e[{r, c}] = a * std::conj(b);
    return DensityMatrix(s.space(), std::move(e));
}

cplx DensityMatrix::entry(const BasisLabel& row, const BasisLabel& col) const {
    auto it = entries_.find({row, col});
    return it == entries_.end() ? cplx{} : it->second;
}

cplx DensityMatrix::trace() const {
    cplx t{};
    for (const auto& [rc, v] : entries_)
        if (rc.first == rc.second) t += v;
    return t;
}

bool DensityMatrix::is_hermitian(double tol) const {
    for (const auto& [rc, v] : entries_)
        if (std::abs(v - std::conj(entry(rc.second, rc.first))) > tol) return false;
    return true;
}

double DensityMatrix::min_eigenvalue() const {
    std::set<BasisLabel> support;
    for (const auto& [rc, _] : entries_) {
        support.insert(rc.first);
        support.insert(rc.second);
    }
    if (support.empty()) return 0.0;
    const std::vector<BasisLabel> basis(support.begin(), support.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense(*this, basis), Eigen::EigenvaluesOnly);
    double m = es.eigenvalues().minCoeff();
    if (basis.size() < space_.dimension()) m = std::min(m, 0.0);
    return m;
}

DensityMatrix operator+(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_space(a.space(), b.space(), "density-matrix sum");
    auto e = a.entries_;
    for (const auto& [rc, v] : b.entries_) accumulate(e, rc, v);
    return DensityMatrix(a.space_, std::move(e));
}

DensityMatrix operator*(double w, const DensityMatrix& rho) {
    auto e = rho.entries_;
    for (auto& [_, v] : e) v *= w;
    return DensityMatrix(rho.space_, std::move(e));
}

// ----------------------------------------------------------- operations

StateVector tensor(const StateVector& a, const StateVector& b) {
    const Space u = merge_disjoint(a.space(), b.space());
    std::map<BasisLabel, cplx> amps;
    for (const auto& [la, va] : a.amplitudes()) {
        BasisLabel base = embed_label(a.space(), la, u);
        for (const auto& [lb, vb] : b.amplitudes()) {
            BasisLabel l = base;
            for (std::size_t i = 0; i < b.space().size(); ++i) l[u.index_of(b.space()[i].id)] = lb[i];
            amps[l] = va * vb;
        }
    }
    return StateVector(u, std::move(amps));
}

cplx inner(const StateVector& a, const StateVector& b) {
    require_same_space(a.space(), b.space(), "inner product");
    cplx s{};
    for (const auto& [lbl, va] : a.amplitudes()) {
        auto it = b.amplitudes().find(lbl);
        if (it != b.amplitudes().end()) s += std::conj(va) * it->second;
    }
    return s;
}

StateVector apply(const LinearOperator& op, const StateVector& s) {
    const Space& ss = s.space();
    std::vector<std::size_t> pos;
    for (const auto& sub : op.space().subsystems()) {
        auto i = ss.find(sub.id);
        if (!i) throw UnknownSubsystem("operator acts on '" + sub.id + "', absent from the state");
        if (!(ss[*i] == sub)) throw SpaceMismatch("operator and state disagree on the alphabet of '" + sub.id + "'");
        pos.push_back(*i);
    }
    // Group the operator's entries by column once.
    std::map<BasisLabel, std::vector<std::pair<BasisLabel, cplx>>> cols;
    for (const auto& [rc, v] : op.entries()) cols[rc.second].emplace_back(rc.first, v);

    std::map<BasisLabel, cplx> out;
    BasisLabel key(pos.size());
    for (const auto& [lbl, amp] : s.amplitudes()) {
        for (std::size_t k = 0; k < pos.size(); ++k) key[k] = lbl[pos[k]];
        auto it = cols.find(key);
        if (it == cols.end()) continue;
        for (const auto& [row, v] : it->second) {
            BasisLabel r = lbl;
            for (std::size_t k = 0; k < pos.size(); ++k) r[pos[k]] = row[k];
            accumulate(out, r, v * amp);
        }
    }
    return StateVector(ss, std::move(out));
}

namespace {

struct Split {
    Space kept;
    std::vector<std::size_t> kept_pos;
    std::vector<std::size_t> env_pos;
};

Split split_space(const Space& space, const std::set<std::string>& keep) {
    if (keep.empty()) throw InvalidParameter("partial trace needs a nonempty keep set");
    Split sp{space.restrict_to(keep), {}, {}};
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (keep.count(space[i].id))
            sp.kept_pos.push_back(i);
        else
            sp.env_pos.push_back(i);
    }
    return sp;
}

BasisLabel pick(const BasisLabel& l, const std::vector<std::size_t>& pos) {
    BasisLabel out(pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k) out[k] = l[pos[k]];
    return out;
}

}  // namespace

DensityMatrix partial_trace(const StateVector& s, const std::set<std::string>& keep) {
    const Split sp = split_space(s.space(), keep);
    std::map<BasisLabel, std::vector<std::pair<BasisLabel, cplx>>> by_env;
    for (const auto& [lbl, amp] : s.amplitudes())
        by_env[pick(lbl, sp.env_pos)].emplace_back(pick(lbl, sp.kept_pos), amp);
    MatrixEntries e;
    for (const auto& [_, group] : by_env)
        for (const auto& [r, a] : group)
            for (const auto& [c, b] : group) accumulate(e, std::make_pair(r, c), a * std::conj(b));
    return DensityMatrix(sp.kept, std::move(e));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<std::string>& keep) {
    const Split sp = split_space(rho.space(), keep);
    MatrixEntries e;
    for (const auto& [rc, v] : rho.entries()) {
        if (pick(rc.first, sp.env_pos) != pick(rc.second, sp.env_pos)) continue;
        accumulate(e, std::make_pair(pick(rc.first, sp.kept_pos), pick(rc.second, sp.kept_pos)), v);
    }
    return DensityMatrix(sp.kept, std::move(e));
}

double fidelity_pure(const DensityMatrix& rho, const StateVector& target) {
    require_same_space(rho.space(), target.space(), "fidelity");
    if (std::abs(target.norm2() - 1.0) > 1e-10) throw InvalidParameter("fidelity target must be normalized");
    cplx f{};
    for (const auto& [rc, v] : rho.entries()) {
        const cplx tr = target.amplitude(rc.first);
        if (tr == cplx{}) continue;
        f += std::conj(tr) * v * target.amplitude(rc.second);
    }
    return std::clamp(f.real(), 0.0, 1.0);
}

Normalized normalize(const StateVector& s, double floor) {
    const double p = s.norm2();
    if (!(p > floor)) throw DegenerateBranch("branch norm " + std::to_string(p) + " is below the floor");
    return {cplx{1.0 / std::sqrt(p), 0.0} * s, p};
}

StateVector project_out(const StateVector& s, std::string_view id, std::string_view level) {
    const auto k = s.space().index_of(id);
    const int lv = s.space().level_index(k, level);
    std::set<std::string> rest = s.space().ids();
    rest.erase(std::string(id));
    const Space out_space = s.space().restrict_to(rest);
    std::map<BasisLabel, cplx> amps;
    for (const auto& [lbl, a] : s.amplitudes()) {
        if (lbl[k] != lv) continue;
        BasisLabel l = lbl;
        l.erase(l.begin() + static_cast<std::ptrdiff_t>(k));
        amps[l] = a;
    }
    return StateVector(out_space, std::move(amps));
}

StateVector rename_subsystems(const StateVector& s, const std::map<std::string, std::string>& renames) {
    std::vector<Subsystem> subs = s.space().subsystems();
    for (auto& sub : subs) {
        auto it = renames.find(sub.id);
        if (it != renames.end()) sub.id = it->second;
    }
    for (const auto& [from, _] : renames) s.space().index_of(from);
    const Space renamed(subs);
    // Position of each old subsystem in the renamed (re-sorted) space.
    std::vector<std::size_t> where(s.space().size());
    for (std::size_t i = 0; i < s.space().size(); ++i) where[i] = renamed.index_of(subs[i].id);
    std::map<BasisLabel, cplx> amps;
    for (const auto& [lbl, a] : s.amplitudes()) {
        BasisLabel l(lbl.size());
        for (std::size_t i = 0; i < lbl.size(); ++i) l[where[i]] = lbl[i];
        amps[l] = a;
    }
    return StateVector(renamed, std::move(amps));
}

double overlap_modulus(const StateVector& a, const StateVector& b) { return std::abs(inner(a, b)); }

Eigen::VectorXcd to_dense(const StateVector& s, const std::vector<BasisLabel>& basis) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) v[static_cast<Eigen::Index>(i)] = s.amplitude(basis[i]);
    return v;
}

namespace {
template <typename Entries>
Eigen::MatrixXcd dense_from_entries(const Entries& entries, const std::vector<BasisLabel>& basis) {
    std::map<BasisLabel, Eigen::Index> idx;
    for (std::size_t i = 0; i < basis.size(); ++i) idx[basis[i]] = static_cast<Eigen::Index>(i);
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [rc, v] : entries) {
        auto r = idx.find(rc.first), c = idx.find(rc.second);
        if (r != idx.end() && c != idx.end()) m(r->second, c->second) = v;
    }
    return m;
}
}  // namespace

Eigen::MatrixXcd to_dense(const LinearOperator& op, const std::vector<BasisLabel>& basis) {
    return dense_from_entries(op.entries(), basis);
}

Eigen::MatrixXcd to_dense(const DensityMatrix& rho, const std::vector<BasisLabel>& basis) {
    return dense_from_entries(rho.entries(), basis);
}

}  // namespace clonesim
