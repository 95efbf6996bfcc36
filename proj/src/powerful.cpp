#include "shiftprod/powerful.hpp"

#include "shiftprod/errors.hpp"

namespace shiftprod {

bool is_powerful(const Factorization& f) {
    for (const auto& [p, e] : f.entries)
        if (e < 2)
            return false;
    return true;
}

bool is_powerful(const BigFactorization& f) {
    if (!f.complete())
        throw IncompleteFactorizationError(
            "is_powerful: refusing to judge an incomplete factorization "
            "(cofactor " + f.cofactor.get_str() + ")");
    for (const auto& entry : f.entries)
        if (entry.exponent < 2)
            return false;
    return true;
}

bool is_powerful(std::uint64_t m) {
    if (m == 0)
        throw DomainError("is_powerful: argument must be >= 1");
    return is_powerful(factorize(m));
}

} // namespace shiftprod
