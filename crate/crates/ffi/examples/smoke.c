#include <stdio.h>
#include <string.h>

#include "absaf.h"

static const char *AF =
    "arg(p1). arg(f1). arg(p2). arg(f2). arg(p3). arg(s1). arg(m1). arg(s2).\n"
    "att(f1,p1). att(f1,p2). att(p2,f1). att(f2,p3). att(p3,f2).\n"
    "att(m1,s1). att(m1,s2). att(s2,m1).\n";

static const char *BALLOTS = "3 : p1,p2\n2 : f1\n2 : m1\n1 : s2,p3\n";

static int fail(const char *what) {
    const char *msg = absaf_last_error();
    fprintf(stderr, "%s: %s\n", what, msg ? msg : "(no message)");
    return 1;
}

int main(void) {
    AbsafElection *e = NULL;
    if (absaf_load(AF, "apx", BALLOTS, "text", &e) != ABSAF_STATUS_OK) return fail("load");

    size_t n = 0, m = 0;
    if (absaf_num_voters(e, &n) != ABSAF_STATUS_OK) return fail("voters");
    if (absaf_num_extensions(e, &m) != ABSAF_STATUS_OK) return fail("extensions");
    printf("voters %zu extensions %zu\n", n, m);

    size_t chosen[2];
    size_t len = 0;
    double objective = 0.0;
    if (absaf_select(e, "maxcov", "exact", "regular", 2, 0, 0.0, chosen, 2, &len, &objective) != ABSAF_STATUS_OK)
        return fail("select");
    printf("maxcov %.0f\n", objective);
    for (size_t i = 0; i < len; i++) {
        char *labels = NULL;
        if (absaf_extension_labels(e, chosen[i], &labels) != ABSAF_STATUS_OK) return fail("labels");
        printf("{%s}\n", labels);
        absaf_string_free(labels);
    }

    bool holds = false;
    size_t witness = 0;
    if (absaf_check_jr(e, chosen, len, 2, "regular", &holds, &witness) != ABSAF_STATUS_OK) return fail("jr");
    printf("jr %s\n", holds ? "holds" : "violated");

    if (absaf_select(e, "plurality", "exact", "regular", 2, 0, 0.0, chosen, 2, &len, NULL) != ABSAF_STATUS_INVALID_INPUT)
        return fail("bad rule accepted");
    printf("error %s\n", absaf_last_error());

    absaf_free(e);
    return 0;
}
