#ifndef CASIMIR_H
#define CASIMIR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CasimirStatus {
  CASIMIR_STATUS_OK = 0,
  CASIMIR_STATUS_DOMAIN = 1,
  CASIMIR_STATUS_PRESCRIPTION_REQUIRED = 2,
  CASIMIR_STATUS_EXTRAPOLATION_REQUIRED = 3,
  CASIMIR_STATUS_UNSUPPORTED_GEOMETRY = 4,
  CASIMIR_STATUS_NON_CONVERGENCE = 5,
  CASIMIR_STATUS_PARSE = 6,
  CASIMIR_STATUS_NULL_POINTER = 7,
  CASIMIR_STATUS_PANIC = 8,
} CasimirStatus;

typedef enum CasimirGeometry {
  CASIMIR_GEOMETRY_CYLINDER_PLATE = 1,
  CASIMIR_GEOMETRY_SPHERE_PLATE = 2,
} CasimirGeometry;

/**
 * Opaque material model.
 */
typedef struct CasimirModel CasimirModel;

typedef struct CasimirLifshitzResult {
  /**
   * J/m².
   */
  double free_energy_per_area;
  /**
   * Pa.
   */
  double pressure;
  uint64_t terms_used;
  double quadrature_error_estimate;
  double zero_frequency_share;
  bool mixed_prescription;
  bool euler_maclaurin_tail;
} CasimirLifshitzResult;

typedef struct CasimirCylinderForce {
  /**
   * N/m.
   */
  double value;
  double pft;
  double relative_deviation;
  bool valid;
} CasimirCylinderForce;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next library call on the same thread.
 */
const char *casimir_last_error_message(void);

const char *casimir_version(void);

/**
 * Drude model (Drude bulk, `r_TE = 0` at zero frequency) from a bundled
 * preset such as `"Au-paper"`; tabulated presets give a tabulated model.
 */
enum CasimirStatus casimir_model_preset(const char *name, struct CasimirModel **model_out);

enum CasimirStatus casimir_model_drude(double omega_p_ev,
                                       double gamma_ev,
                                       struct CasimirModel **model_out);

enum CasimirStatus casimir_model_plasma(double omega_p_ev, struct CasimirModel **model_out);

enum CasimirStatus casimir_model_impedance_ir(double omega_p_ev, struct CasimirModel **model_out);

enum CasimirStatus casimir_model_ideal(struct CasimirModel **model_out);

/**
 * Releases a model; null is ignored.
 */
void casimir_model_free(struct CasimirModel *model);

/**
 * Plate-plate free energy and pressure. `rel_tol <= 0` selects the default.
 */
enum CasimirStatus casimir_free_energy(const struct CasimirModel *model,
                                       double z,
                                       double temperature,
                                       double rel_tol,
                                       struct CasimirLifshitzResult *result_out);

enum CasimirStatus casimir_pressure(const struct CasimirModel *model,
                                    double z,
                                    double temperature,
                                    double rel_tol,
                                    double *pressure_out);

/**
 * Ideal-metal PFT force: N/m for a cylinder, N for a sphere. `kind` is a
 * [`CasimirGeometry`] value.
 */
enum CasimirStatus casimir_pft_force(uint32_t kind, double z, double radius, double *force_out);

enum CasimirStatus casimir_exact_cylinder_force(double z,
                                                double radius,
                                                struct CasimirCylinderForce *result_out);

/**
 * Zero-temperature entropy per area of Drude plates, J/(K m²).
 */
enum CasimirStatus casimir_drude_zero_t_entropy(double z, double omega_p_ev, double *entropy_out);

/**
 * Yukawa pressure between two homogeneous semispaces (densities in kg/m³).
 */
enum CasimirStatus casimir_yukawa_pressure_semispaces(double z,
                                                      double density_a,
                                                      double density_b,
                                                      double alpha,
                                                      double lambda,
                                                      double *pressure_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CASIMIR_H */
