#pragma once

#include <stdexcept>
#include <string>

namespace barrierinv {

// Failure taxonomy shared by the whole library.  The CLI maps these onto
// process exit codes (config -> 2, numerical/data -> 3).
enum class errc {
  invalid_interval,
  non_convergence,
  invalid_grid,
  out_of_domain,
  energy_out_of_range,
  shape_mismatch,
  bracket_failure,
  non_monotone_data,
  non_monotone_result,
  grid_too_coarse,
  domain_error,
  branch_overlap,
  singular_system,
  config_error,
  io_error,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_interval:    return "invalid_interval";
    case errc::non_convergence:     return "non_convergence";
    case errc::invalid_grid:        return "invalid_grid";
    case errc::out_of_domain:       return "out_of_domain";
    case errc::energy_out_of_range: return "energy_out_of_range";
    case errc::shape_mismatch:      return "shape_mismatch";
    case errc::bracket_failure:     return "bracket_failure";
    case errc::non_monotone_data:   return "non_monotone_data";
    case errc::non_monotone_result: return "non_monotone_result";
    case errc::grid_too_coarse:     return "grid_too_coarse";
    case errc::domain_error:        return "domain_error";
    case errc::branch_overlap:      return "branch_overlap";
    case errc::singular_system:     return "singular_system";
    case errc::config_error:        return "config_error";
    case errc::io_error:            return "io_error";
  }
  return "unknown";
}

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) { throw error(code, msg); }

}  // namespace barrierinv
