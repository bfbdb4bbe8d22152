/**
 * Closed-form speed curves for the dashed figure envelopes.
 *
 * Deliberately re-implemented here rather than imported, so the figure
 * layer stays independent of the simulator; the test suite cross-checks
 * these against the `rwre oracle` command at 1e-9.
 */

/** Speed of the walk in the frozen Bernoulli(rho) field at bias p. */
export function staticSpeed(p: number, rho: number): number {
  if (!(p > 0 && p < 1) || !(rho >= 0 && rho <= 1)) {
    throw new RangeError(`staticSpeed outside domain: p=${p}, rho=${rho}`);
  }
  if (p < 0.5) return staticSpeed(1 - p, 1 - rho); // relabel both parameters
  if (rho < 0.5) return -staticSpeed(p, 1 - rho); // reflect, changing sign
  if (rho <= p) return 0;
  return ((2 * p - 1) * (rho - p)) / (rho * (1 - p) + p * (1 - rho));
}

/** Speed in the averaged medium (the fast-dynamics limit). */
export function averagedSpeed(p: number, rho: number): number {
  if (!(p > 0 && p < 1) || !(rho >= 0 && rho <= 1)) {
    throw new RangeError(`averagedSpeed outside domain: p=${p}, rho=${rho}`);
  }
  return (2 * rho - 1) * (2 * p - 1);
}
