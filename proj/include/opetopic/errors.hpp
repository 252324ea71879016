#pragma once
#include <stdexcept>
#include <string>

namespace opetopic {

struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct coherence_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct substitution_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace opetopic
