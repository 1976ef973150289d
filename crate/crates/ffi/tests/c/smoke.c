#include <math.h>
#include <stdio.h>
#include "chermite.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, ch_last_error_message()); return 1; } } while (0)

int main(void) {
    ChComplex z = {0.5, -0.25}, out;
    CHECK(ch_chp_eval(3, 1, z, 1.0, &out) == CH_STATUS_OK);

    ChPoly *p = ch_poly_new_chp(3, 1);
    ChComplex exact;
    CHECK(ch_poly_eval(p, z, 1.0, 1, &exact) == CH_STATUS_OK);
    CHECK(fabs(exact.re - out.re) < 1e-13 && fabs(exact.im - out.im) < 1e-13);
    ch_poly_free(p);

    CHECK(ch_chp_eval(1, 1, z, -1.0, &out) == CH_STATUS_DOMAIN);

    ChRule *rule = NULL;
    CHECK(ch_rule_new(32, 1.0, &rule) == CH_STATUS_OK);
    double q, e;
    CHECK(ch_norm_squared_quad(rule, 2, 2, 1.0, &q) == CH_STATUS_OK);
    CHECK(ch_norm_squared_closed(2, 2, 1.0, &e) == CH_STATUS_OK);
    CHECK(fabs(q - e) < 1e-8 * e);
    ch_rule_free(rule);

    ChSuite *suite = NULL;
    CHECK(ch_suite_run(7, 2, NULL, 0, &suite) == CH_STATUS_OK);
    CHECK(ch_suite_len(suite) == 2 * ch_identity_count());
    CHECK(ch_suite_unexpected_failures(suite) == 0);
    ch_suite_free(suite);

    printf("ok\n");
    return 0;
}
