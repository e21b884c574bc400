#include <math.h>
#include <stdio.h>
#include "modecap.h"

int main(void) {
    ModecapScenario *s = NULL;
    if (modecap_scenario_from_normalized(1.0, 0.5, 1.0, 1.0, 1.0, 1.0, &s) != MODECAP_STATUS_OK)
        return 10;
    ModecapDof dof;
    if (modecap_dof_bound(s, &dof) != MODECAP_STATUS_OK)
        return 11;
    size_t lo = 0, hi = 0;
    modecap_truncation_indices(s, &lo, &hi);
    ModecapProfile *p = NULL;
    if (modecap_profile_new(s, &p) != MODECAP_STATUS_OK)
        return 12;
    printf("%.9f %zu %zu %zu\n", dof.total, lo, hi, (size_t)modecap_profile_len(p));
    modecap_profile_free(p);
    modecap_scenario_free(s);

    if (modecap_scenario_from_normalized(-1.0, 0.5, 1.0, 1.0, 1.0, 1.0, &s) != MODECAP_STATUS_DOMAIN)
        return 13;
    if (modecap_last_error_message() == NULL)
        return 14;
    return 0;
}
