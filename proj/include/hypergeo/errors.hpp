#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hypergeo {

// Precondition violations on the mathematical inputs (not programming bugs).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A Gamma factor hit a nonpositive integer. Carries the offending root.
class pole_error : public domain_error {
public:
    pole_error(const std::string& what, std::vector<double> root)
        : domain_error(what), root_(std::move(root)) {}
    const std::vector<double>& root() const noexcept { return root_; }

private:
    std::vector<double> root_;
};

inline void require(bool ok, const char* what) {
    if (!ok) throw domain_error(what);
}

}  // namespace hypergeo
