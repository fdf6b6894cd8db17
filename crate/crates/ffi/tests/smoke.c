#include <stdio.h>
#include <stdlib.h>

#include "spheromesh.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        SmStatus s_ = (call);                                              \
        if (s_ != SM_STATUS_OK) {                                          \
            const char *m_ = sm_last_error_message();                      \
            fprintf(stderr, "%s failed: %d %s\n", #call, s_, m_ ? m_ : ""); \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    SmDomain *d = NULL;
    SmMesh *m = NULL;
    size_t nv = 0, nt = 0;
    SmQuality q;

    CHECK(sm_domain_parse("fourlobe:b=0.1", &d));
    CHECK(sm_mesh_build(d, 3, SM_OCTANTS_ALL, &m));
    CHECK(sm_mesh_counts(m, &nv, &nt));
    CHECK(sm_mesh_quality(m, &q));
    if (nv != 343 || nt != 1296 || q.tet_count != nt || q.r_jl <= 0.0) {
        fprintf(stderr, "unexpected mesh: %zu vertices, %zu tets\n", nv, nt);
        return 1;
    }
    if (sm_domain_parse("expr:1 +", &d) != SM_STATUS_PARSE_ERROR || sm_last_error_message() == NULL) {
        fprintf(stderr, "parse error not reported\n");
        return 1;
    }
    printf("%zu %zu %.6f %.6f\n", nv, nt, q.r_vr, q.r_jl);
    sm_mesh_free(m);
    sm_domain_free(d);
    return 0;
}
