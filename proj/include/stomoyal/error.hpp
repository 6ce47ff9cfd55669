#ifndef STOMOYAL_ERROR_HPP
#define STOMOYAL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace stomoyal {

// Every failure mode surfaces with a distinct diagnostic code so the CLI
// can report structured errors instead of bare messages.
enum class Diag {
  usage,              // bad command line
  syntax,             // document / expression syntax error (carries line:col)
  schema,             // structurally invalid document
  unresolved_name,    // reference to an undeclared kernel / variable / functional
  malformed_rational, // literal not of the form p or p/q with q != 0
  grid_mismatch,      // kernels with different grid resolutions combined
  length_mismatch,    // kernel value list does not match the declared grid
  atlas_mismatch,     // functionals over different variable atlases combined
  argument,           // out-of-contract argument (negative order, arity, ...)
  degree_cap,         // moment computation above the configured degree cap
  missing_variable,   // evaluation assignment does not cover a variable
  linear_dependence,  // Gram-Schmidt hit a linearly dependent kernel
};

const char* diag_code(Diag d);

class Error : public std::runtime_error {
 public:
  Error(Diag code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Diag code() const { return code_; }

 private:
  Diag code_;
};

}  // namespace stomoyal

#endif
