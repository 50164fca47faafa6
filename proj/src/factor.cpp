#include "termrec/factor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "termrec/errors.hpp"
#include "termrec/rng.hpp"
#include "termrec/text.hpp"

namespace termrec {

void TrainConfig::validate() const {
    if (d < 1) throw DataError("latent dimension must be >= 1");
    if (gamma < 0.0) throw DataError("regularization weight must be >= 0");
    if (learning_rate <= 0.0) throw DataError("learning rate must be positive");
    if (max_epochs < 1) throw DataError("max_epochs must be >= 1");
    if (rel_tol <= 0.0) throw DataError("rel_tol must be positive");
}

double FactorModel::estimate(CodeId c, TermId s) const {
    if (c < 0 || c >= u.rows) throw DataError("code id " + std::to_string(c) + " out of range");
    if (s < 0 || s >= v.rows) throw DataError("term id " + std::to_string(s) + " out of range");
    return dot({u.row(c), static_cast<std::size_t>(d)}, {v.row(s), static_cast<std::size_t>(d)});
}

std::uint64_t dictionary_hash(const std::vector<std::string>& code_names,
                              const std::vector<std::string>& term_names) {
    std::uint64_t h = fnv1a64("dict");
    for (const auto& c : code_names) {
        h = fnv1a64(h, c);
        h = fnv1a64(h, "\x1f");
    }
    h = fnv1a64(h, "\x1e");
    for (const auto& t : term_names) {
        h = fnv1a64(h, t);
        h = fnv1a64(h, "\x1f");
    }
    return h;
}

void bind_dictionaries(FactorModel& model, std::vector<std::string> code_names,
                       std::vector<std::string> term_names) {
    if (static_cast<std::int32_t>(code_names.size()) != model.u.rows ||
        static_cast<std::int32_t>(term_names.size()) != model.v.rows)
        throw DataError("dictionary sizes do not match model shape");
    model.dict_hash = dictionary_hash(code_names, term_names);
    model.code_names = std::move(code_names);
    model.term_names = std::move(term_names);
}

namespace {

void check_shapes(const CooccurrenceMatrix& a, const Mat& u, const Mat& v) {
    if (u.rows != a.n || v.rows != a.m || u.cols != v.cols)
        throw DataError("shape mismatch: A is " + std::to_string(a.n) + "x" + std::to_string(a.m) +
                        ", U is " + std::to_string(u.rows) + "x" + std::to_string(u.cols) +
                        ", V is " + std::to_string(v.rows) + "x" + std::to_string(v.cols));
}

} // namespace

double objective(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma) {
    check_shapes(a, u, v);
    Mat gu, gv;
    gram(u, gu);
    gram(v, gv);
    double uv_sq = 0.0;
    for (std::size_t i = 0; i < gu.data.size(); ++i) uv_sq += gu.data[i] * gv.data[i];
    const double fit = a.frob_sq() - 2.0 * sparse_inner(a, u, v) + uv_sq;
    return fit + 0.5 * gamma * (frob_sq(u) + frob_sq(v));
}

double objective_dense(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma) {
    check_shapes(a, u, v);
    double fit = 0.0;
    for (std::int32_t c = 0; c < a.n; ++c) {
        for (std::int32_t t = 0; t < a.m; ++t) {
            const double r =
                a.at(c, t) - dot({u.row(c), static_cast<std::size_t>(u.cols)},
                                 {v.row(t), static_cast<std::size_t>(v.cols)});
            fit += r * r;
        }
    }
    return fit + 0.5 * gamma * (frob_sq_serial(u) + frob_sq_serial(v));
}

namespace {

void gradient_u(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma,
                Mat& grad_u) {
    Mat av, gv;
    spmm(a, v, av);  // n x d
    gram(v, gv);     // d x d
    mul_small(u, gv, grad_u);
    axpby(-2.0, av, 2.0, grad_u);
    axpby(gamma, u, 1.0, grad_u);
}

void gradient_v(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma,
                Mat& grad_v) {
    Mat atu, gu;
    spmm_t(a, u, atu); // m x d
    gram(u, gu);
    mul_small(v, gu, grad_v);
    axpby(-2.0, atu, 2.0, grad_v);
    axpby(gamma, v, 1.0, grad_v);
}

} // namespace

void gradients(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma, Mat& grad_u,
               Mat& grad_v) {
    check_shapes(a, u, v);
    gradient_u(a, u, v, gamma, grad_u);
    gradient_v(a, u, v, gamma, grad_v);
}

double gradient_check(const CooccurrenceMatrix& a, const Mat& u, const Mat& v, double gamma,
                      double h) {
    Mat grad_u, grad_v;
    gradients(a, u, v, gamma, grad_u, grad_v);

    double max_rel = 0.0;
    auto probe = [&](Mat& x, const Mat& other, bool x_is_u, std::size_t idx, double analytic) {
        const double saved = x.data[idx];
        x.data[idx] = saved + h;
        const double up = x_is_u ? objective(a, x, other, gamma) : objective(a, other, x, gamma);
        x.data[idx] = saved - h;
        const double dn = x_is_u ? objective(a, x, other, gamma) : objective(a, other, x, gamma);
        x.data[idx] = saved;
        const double fd = (up - dn) / (2.0 * h);
        const double rel = std::abs(analytic - fd) / std::max({std::abs(analytic), std::abs(fd), 1e-8});
        max_rel = std::max(max_rel, rel);
    };

    Mat uu = u, vv = v;
    for (std::size_t i = 0; i < uu.data.size(); ++i) probe(uu, vv, true, i, grad_u.data[i]);
    for (std::size_t i = 0; i < vv.data.size(); ++i) probe(vv, uu, false, i, grad_v.data[i]);
    return max_rel;
}

TrainResult train(const CooccurrenceMatrix& a, const TrainConfig& config) {
    config.validate();
    if (config.d >= std::min(a.n, a.m))
        throw DataError("latent dimension " + std::to_string(config.d) +
                        " must be below min(n, m) = " + std::to_string(std::min(a.n, a.m)));

    TrainResult res;
    FactorModel& model = res.model;
    model.d = config.d;
    model.gamma = config.gamma;
    model.lambda = a.lambda;
    model.seed = config.seed;

    // init: i.i.d. uniform in (-1/sqrt(d), 1/sqrt(d)), U rows first then V
    const double scale = 1.0 / std::sqrt(static_cast<double>(config.d));
    Rng rng(config.seed);
    model.u = Mat(a.n, config.d);
    model.v = Mat(a.m, config.d);
    for (double& x : model.u.data) x = rng.uniform(-scale, scale);
    for (double& x : model.v.data) x = rng.uniform(-scale, scale);

    double obj = objective(a, model.u, model.v, config.gamma);
    if (!std::isfinite(obj)) throw TrainingError("non-finite initial objective", 0);
    res.objective_trace.push_back(obj);

    double lr = config.learning_rate;
    Mat grad_u, grad_v, cand_u, cand_v;
    for (std::int32_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        bool accepted = false;
        double cand_obj = obj;
        gradient_u(a, model.u, model.v, config.gamma, grad_u);
        for (int halving = 0; halving <= 20; ++halving) {
            // U step with V fixed, then V step against the updated U
            cand_u = model.u;
            axpby(-lr, grad_u, 1.0, cand_u);
            gradient_v(a, cand_u, model.v, config.gamma, grad_v);
            cand_v = model.v;
            axpby(-lr, grad_v, 1.0, cand_v);

            cand_obj = objective(a, cand_u, cand_v, config.gamma);
            if (std::isfinite(cand_obj) && cand_obj <= obj) {
                accepted = true;
                break;
            }
            lr *= 0.5;
        }
        if (!accepted) {
            if (!std::isfinite(cand_obj))
                throw TrainingError("objective diverged", epoch);
            break; // could not decrease further
        }

        model.u = std::move(cand_u);
        model.v = std::move(cand_v);
        res.epochs = epoch;
        res.objective_trace.push_back(cand_obj);
        const double decrease = obj - cand_obj;
        obj = cand_obj;
        lr *= 1.2;
        if (decrease < config.rel_tol * std::max(std::abs(obj), 1e-300)) {
            res.stopped_by_tol = true;
            break;
        }
    }
    res.final_learning_rate = lr;
    return res;
}

namespace {

constexpr char kMagic[8] = {'T', 'R', 'F', 'M', '0', '0', '0', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(buf, 8);
}

std::uint64_t get_u64(std::istream& is) {
    char buf[8];
    is.read(buf, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}

double get_f64(std::istream& is) {
    const std::uint64_t v = get_u64(is);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

} // namespace

void save_model(const FactorModel& model, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot write '" + path + "'");
    os.write(kMagic, 8);
    put_u64(os, static_cast<std::uint64_t>(model.u.rows));
    put_u64(os, static_cast<std::uint64_t>(model.v.rows));
    put_u64(os, static_cast<std::uint64_t>(model.d));
    put_f64(os, model.gamma);
    put_f64(os, model.lambda);
    put_u64(os, model.seed);
    put_u64(os, model.dict_hash);
    for (double x : model.u.data) put_f64(os, x);
    for (double x : model.v.data) put_f64(os, x);
    if (!os) throw DataError("write failed for '" + path + "'");

    std::ofstream dict(path + ".dict");
    if (!dict) throw DataError("cannot write '" + path + ".dict'");
    dict << "kind,raw\n";
    for (const auto& c : model.code_names) dict << "code," << csv_quote(c) << "\n";
    for (const auto& t : model.term_names) dict << "term," << csv_quote(t) << "\n";
}

FactorModel load_model(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open '" + path + "'");
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw DataError("'" + path + "' is not a model file");

    FactorModel model;
    const auto n = static_cast<std::int32_t>(get_u64(is));
    const auto m = static_cast<std::int32_t>(get_u64(is));
    model.d = static_cast<std::int32_t>(get_u64(is));
    model.gamma = get_f64(is);
    model.lambda = get_f64(is);
    model.seed = get_u64(is);
    model.dict_hash = get_u64(is);
    model.u = Mat(n, model.d);
    model.v = Mat(m, model.d);
    for (double& x : model.u.data) x = get_f64(is);
    for (double& x : model.v.data) x = get_f64(is);
    if (!is) throw DataError("truncated model file '" + path + "'");

    std::ifstream dict(path + ".dict");
    if (!dict) throw DataError("cannot open '" + path + ".dict'");
    std::string line;
    std::getline(dict, line); // header
    while (std::getline(dict, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) throw DataError("bad dictionary line: '" + line + "'");
        if (fields[0] == "code") model.code_names.push_back(fields[1]);
        else if (fields[0] == "term") model.term_names.push_back(fields[1]);
        else throw DataError("bad dictionary kind: '" + fields[0] + "'");
    }
    if (dictionary_hash(model.code_names, model.term_names) != model.dict_hash)
        throw DataError("dictionary sidecar does not match model '" + path + "'");
    return model;
}

} // namespace termrec
