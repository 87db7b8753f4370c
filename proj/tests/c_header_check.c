/* The public header must compile as C and link against the shared library. */
#include <math.h>
#include <stdio.h>

#include "psimax/psimax.h"

int main(void) {
  const double bearings[] = {0.0, 2.0943951023931953, 4.1887902047863905};
  double psi = 0.0;
  int inside = 0;
  if (psimax_psi_max(bearings, 3, &psi) != PSIMAX_OK) return 1;
  if (psimax_inside_convex_hull(bearings, 3, &inside, NULL) != PSIMAX_OK || !inside) return 1;
  if (fabs(psi - 2.0943951023931953) > 1e-12) return 1;
  printf("psimax %s from C: psi_max=%.6f\n", psimax_version(), psi);
  return 0;
}
