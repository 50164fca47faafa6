// Times the OpenMP kernels against their serial references and checks the
// results stay bit-identical. Also times the parallel co-occurrence builder
// at one and many workers.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "termrec/cooccur.hpp"
#include "termrec/factor.hpp"
#include "termrec/kernels.hpp"
#include "termrec/rng.hpp"

using namespace termrec;

namespace {

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const double t0 = now_ms();
        fn();
        best = std::min(best, now_ms() - t0);
    }
    return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-22s serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   %s\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms,
                identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const std::int32_t n = argc > 1 ? std::stoi(argv[1]) : 3000;
    const std::int32_t m = argc > 2 ? std::stoi(argv[2]) : 1500;
    const std::int32_t d = argc > 3 ? std::stoi(argv[3]) : 64;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("sparse A %dx%d (1%% fill), dense factors d=%d\n\n", n, m, d);

    Rng rng(1);
    CooccurrenceMatrix a;
    a.n = n;
    a.m = m;
    for (std::int32_t c = 0; c < n; ++c)
        for (std::int32_t t = 0; t < m; ++t)
            if (rng.uniform() < 0.01) {
                a.code_of.push_back(c);
                a.term_of.push_back(t);
                a.weight.push_back(rng.uniform(0.1, 4.0));
            }
    a.finalize();

    Mat u(n, d), v(m, d);
    for (double& x : u.data) x = rng.uniform(-1, 1);
    for (double& x : v.data) x = rng.uniform(-1, 1);

    Mat s_out, p_out;
    report("A*V", time_best_of(3, [&] { spmm_serial(a, v, s_out); }),
           time_best_of(3, [&] { spmm(a, v, p_out); }), s_out == p_out);
    report("A^T*U", time_best_of(3, [&] { spmm_t_serial(a, u, s_out); }),
           time_best_of(3, [&] { spmm_t(a, u, p_out); }), s_out == p_out);
    report("U^T*U", time_best_of(3, [&] { gram_serial(u, s_out); }),
           time_best_of(3, [&] { gram(u, p_out); }), s_out == p_out);
    Mat g = s_out;
    report("U*G", time_best_of(3, [&] { mul_small_serial(u, g, s_out); }),
           time_best_of(3, [&] { mul_small(u, g, p_out); }), s_out == p_out);

    double fs = 0, fp = 0;
    report("frobenius^2", time_best_of(5, [&] { fs = frob_sq_serial(u); }),
           time_best_of(5, [&] { fp = frob_sq(u); }), fs == fp);
    report("<A, UV^T>", time_best_of(3, [&] { fs = sparse_inner_serial(a, u, v); }),
           time_best_of(3, [&] { fp = sparse_inner(a, u, v); }), fs == fp);

    std::vector<double> q(static_cast<std::size_t>(d));
    for (double& x : q) x = rng.uniform(-1, 1);
    std::vector<double> r1, r2;
    report("V*q scores", time_best_of(5, [&] { row_scores_serial(v, q, r1); }),
           time_best_of(5, [&] { row_scores(v, q, r2); }), r1 == r2);

    // one full training epoch on the same matrix
    {
        TrainConfig cfg;
        cfg.d = d;
        cfg.max_epochs = 3;
        cfg.seed = 2;
        const double t0 = now_ms();
        const TrainResult res = train(a, cfg);
        std::printf("\n%d gradient epochs: %.1f ms (objective %.6g -> %.6g)\n", res.epochs,
                    now_ms() - t0, res.objective_trace.front(), res.objective_trace.back());
    }

    // co-occurrence builder: one worker vs all
    {
        Rng gen_rng(7);
        std::vector<PatientEvents> patients(400);
        for (auto& p : patients) {
            const int n_enc = static_cast<int>(gen_rng.uniform_int(5, 40));
            for (int e = 0; e < n_enc; ++e)
                p.encounter_codes.push_back(
                    {static_cast<CodeId>(gen_rng.uniform_int(0, n - 1)),
                     static_cast<CodeId>(gen_rng.uniform_int(0, n - 1))});
            const int n_s = static_cast<int>(gen_rng.uniform_int(5, 60));
            for (int s = 0; s < n_s; ++s)
                p.searches.emplace_back(static_cast<TermId>(gen_rng.uniform_int(0, m - 1)),
                                        static_cast<int>(gen_rng.uniform_int(0, n_enc - 1)));
        }
        CooccurrenceMatrix c1, c2;
#ifdef _OPENMP
        const int max_threads = omp_get_max_threads();
        omp_set_num_threads(1);
        const double t_serial = time_best_of(2, [&] {
            c1 = build_cooccurrence(patients, n, m, 0.5);
        });
        omp_set_num_threads(max_threads);
#else
        const double t_serial = time_best_of(2, [&] {
            c1 = build_cooccurrence(patients, n, m, 0.5);
        });
#endif
        const double t_par = time_best_of(2, [&] { c2 = build_cooccurrence(patients, n, m, 0.5); });
        const bool same = c1.code_of == c2.code_of && c1.term_of == c2.term_of &&
                          c1.weight == c2.weight;
        std::printf("\n");
        report("cooccurrence build", t_serial, t_par, same);
        std::printf("(matrix: %zu stored entries)\n", c1.nnz());
    }
    return 0;
}
