#ifndef CVTELEPORT_H
#define CVTELEPORT_H

/* Generated by cbindgen from the cvteleport-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of a C API call.
 */
typedef enum CvtStatus {
  /**
   * The call succeeded.
   */
  CVT_STATUS_OK = 0,
  /**
   * A required pointer was null.
   */
  CVT_STATUS_NULL_POINTER,
  /**
   * A numeric argument is out of range or not finite.
   */
  CVT_STATUS_INVALID_ARGUMENT,
  /**
   * A matrix fails the symplectic condition.
   */
  CVT_STATUS_NOT_SYMPLECTIC,
  /**
   * The Bell interaction leaves a detected quadrature dark.
   */
  CVT_STATUS_SINGULAR,
  /**
   * The configuration is outside the supported family.
   */
  CVT_STATUS_UNSUPPORTED_STATE,
  /**
   * A covariance matrix fails validation.
   */
  CVT_STATUS_INVALID_STATE,
  /**
   * A string is not valid UTF-8.
   */
  CVT_STATUS_BAD_UTF8,
} CvtStatus;

/**
 * Opaque teleportation protocol handle.
 */
typedef struct CvtProtocol CvtProtocol;

/**
 * Figures of merit of one run on a coherent-state input.
 */
typedef struct CvtMetrics {
  /**
   * Product of the conditional variances; below 1/4 needs entanglement.
   */
  double cond_var_product;
  /**
   * Summed signal-to-noise transfer of both quadratures; above 1 needs
   * entanglement.
   */
  double signal_transfer;
  /**
   * Coherent-state fidelity; above 1/2 beats every classical channel.
   */
  double fidelity;
  /**
   * Mean photon number of the added noise.
   */
  double photon_noise;
  /**
   * cond_var_product < 1/4.
   */
  bool quantum_v;
  /**
   * signal_transfer > 1.
   */
  bool quantum_t;
  /**
   * fidelity > 1/2.
   */
  bool quantum_f;
} CvtMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Create a protocol with QND entanglement of strength `g`, a QND Bell
 * coupling of strength `g_prime`, unity gains, and no local operations.
 *
 * # Safety
 * `out` must be valid for writes. On success it receives a handle that must
 * be released with `cvt_protocol_free`.
 */
enum CvtStatus cvt_protocol_new_qnd(double g, double g_prime, struct CvtProtocol **out);

/**
 * Create a protocol whose Bell stage is an unbalanced beam splitter with
 * transmittance `t` and reflectivity `r`, t^2 + r^2 = 1.
 *
 * # Safety
 * `out` must be valid for writes. On success it receives a handle that must
 * be released with `cvt_protocol_free`.
 */
enum CvtStatus cvt_protocol_new_beamsplitter(double g,
                                             double t,
                                             double r,
                                             struct CvtProtocol **out);

/**
 * Deserialize a protocol from its JSON form.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` valid for writes. On
 * success `out` receives a handle that must be released with
 * `cvt_protocol_free`.
 */
enum CvtStatus cvt_protocol_from_json(const char *text, struct CvtProtocol **out);

/**
 * Serialize a protocol to JSON.
 *
 * # Safety
 * `protocol` must be a live handle and `out` valid for writes. On success
 * `out` receives a string that must be released with `cvt_string_free`.
 */
enum CvtStatus cvt_protocol_to_json(const struct CvtProtocol *protocol, char **out);

/**
 * Release a protocol handle. `protocol` may be null.
 *
 * # Safety
 * `protocol` must have come from a constructor of this library and must not
 * be used afterwards.
 */
void cvt_protocol_free(struct CvtProtocol *protocol);

/**
 * Release a string returned by this library. `text` may be null.
 *
 * # Safety
 * `text` must have come from this library and must not be used afterwards.
 */
void cvt_string_free(char *text);

/**
 * Use unity displacement gains.
 *
 * # Safety
 * `protocol` must be a live handle.
 */
enum CvtStatus cvt_protocol_set_unity_gains(struct CvtProtocol *protocol);

/**
 * Use per-quadrature displacement gains `g_x` and `g_p`.
 *
 * # Safety
 * `protocol` must be a live handle.
 */
enum CvtStatus cvt_protocol_set_scalar_gains(struct CvtProtocol *protocol, double g_x, double g_p);

/**
 * Install the local squeezer pair that minimizes the added noise within the
 * squeezer family for the handle's couplings.
 *
 * # Safety
 * `protocol` must be a live handle.
 */
enum CvtStatus cvt_protocol_apply_improved_squeezers(struct CvtProtocol *protocol);

/**
 * Install the local operations that reach the least possible added noise
 * for the handle's shared state and Bell interaction.
 *
 * # Safety
 * `protocol` must be a live handle.
 */
enum CvtStatus cvt_protocol_apply_optimal_local_ops(struct CvtProtocol *protocol);

/**
 * Compute every figure of merit for a coherent-state input.
 *
 * # Safety
 * `protocol` must be a live handle and `out` valid for writes.
 */
enum CvtStatus cvt_protocol_evaluate(const struct CvtProtocol *protocol, struct CvtMetrics *out);

/**
 * Fidelity of the symmetric scheme whose Bell coupling equals the
 * entangling strength, at unity gains.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CvtStatus cvt_hk_fidelity(double g, double *out);

/**
 * Best fidelity reachable with the local squeezer pair, at unity gains.
 * Independent of the Bell coupling strength.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CvtStatus cvt_improved_fidelity(double g, double *out);

/**
 * Bell coupling strength that maximizes the signal transfer at entangling
 * strength `g`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CvtStatus cvt_transfer_optimal_coupling(double g, double *out);

/**
 * Least added-noise photon number any local operations can reach with the
 * shared state of entangling strength `g`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CvtStatus cvt_noise_floor(double g, double *out);

/**
 * Static description of a status code.
 */
const char *cvt_status_message(enum CvtStatus status);

/**
 * Library version as a static string.
 */
const char *cvt_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CVTELEPORT_H */
