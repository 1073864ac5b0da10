#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace covercomm {

/// Permutation of {0, ..., n-1} as an image list, acting on the right:
/// v.(p q) = (v.p).q.
using Perm = std::vector<int>;

Perm identity_perm(int n);
/// p first, then q.
Perm compose(const Perm& p, const Perm& q);
Perm perm_inverse(const Perm& p);
bool is_identity(const Perm& p);
bool is_permutation(const Perm& p);
long perm_order(const Perm& p);

/// 1-based cycle notation, "()" for the identity.
std::string perm_text(const Perm& p);
/// Inverse of perm_text on `degree` points; throws InputError.
Perm parse_perm(std::string_view text, int degree);

/// Finite group given by generating permutations of a common degree.
struct PermGroup {
    int degree = 1;
    std::vector<Perm> gens;
};

/// All elements of a PermGroup, found breadth-first from the identity, with
/// the right Cayley table.
class Closure {
public:
    explicit Closure(const PermGroup& g, long limit = 1L << 22);

    long size() const noexcept { return static_cast<long>(elements_.size()); }
    int num_gens() const noexcept { return gens_; }
    const Perm& element(long i) const { return elements_[i]; }
    /// Index of p, or -1.
    long find(const Perm& p) const;
    long times_gen(long i, int s) const { return cayley_[i * gens_ + s]; }
    long parent(long i) const { return parent_[i]; }
    int via(long i) const { return via_[i]; }

private:
    int gens_;
    std::vector<Perm> elements_;
    std::map<Perm, long> index_;
    std::vector<long> cayley_;
    std::vector<long> parent_;
    std::vector<int> via_;
};

long group_order(const PermGroup& g);

/// Image list of every element under the assignment gens[s] -> images[s],
/// or nullopt if the assignment does not extend to a homomorphism. `degree`
/// is the target degree, needed only when there are no generators.
std::optional<std::vector<Perm>> extend_homomorphism(const Closure& c, const std::vector<Perm>& images,
                                                     int degree = 1);

/// Product of generator permutations along a word (negative letters use inverses).
Perm evaluate(const std::vector<Perm>& gens, const std::vector<int>& word);

} // namespace covercomm
