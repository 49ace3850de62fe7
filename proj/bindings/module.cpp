#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vendirl/config.hpp"
#include "vendirl/kernels.hpp"
#include "vendirl/misl.hpp"
#include "vendirl/numerics.hpp"
#include "vendirl/trainer.hpp"
#include "vendirl/vendi.hpp"

namespace py = pybind11;
using namespace vendirl;

namespace {

SymMatrix to_sym_matrix(const py::array_t<double>& array) {
  auto buf = array.unchecked<2>();
  if (buf.shape(0) != buf.shape(1))
    fail(ErrorCode::shape_mismatch, "expected a square matrix");
  SymMatrix m(static_cast<int>(buf.shape(0)));
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) m.at(i, j) = buf(i, j);
  return m;
}

Trajectory to_trajectory(const py::array_t<double>& array) {
  auto buf = array.unchecked<2>();
  Trajectory t(static_cast<int>(buf.shape(1)));
  std::vector<double> row(t.dim);
  for (py::ssize_t s = 0; s < buf.shape(0); ++s) {
    for (int d = 0; d < t.dim; ++d) row[d] = buf(s, d);
    t.append(row);
  }
  return t;
}

SkillSample to_sample(const std::vector<py::array_t<double>>& trajectories) {
  SkillSample sample;
  for (const auto& t : trajectories) sample.trajectories.push_back(to_trajectory(t));
  return sample;
}

SimilaritySpec make_spec(const std::string& terms, int knn_k, int rollouts_per_skill,
                         const std::string& mean_reference, bool cosine_rescale,
                         bool psd_clamp) {
  SimilaritySpec spec;
  spec.terms = parse_kernel_terms(terms);
  spec.knn_k = knn_k;
  spec.rollouts_per_skill = rollouts_per_skill;
  spec.mean_reference = parse_mean_reference(mean_reference);
  spec.cosine_rescale = cosine_rescale;
  spec.psd_clamp = psd_clamp;
  spec.validate();
  return spec;
}

py::dict log_to_dict(const MetricLog& log, Method method) {
  py::list epoch, scene, train_vs, eval_vs;
  for (const auto& row : log.rows) {
    epoch.append(row.epoch);
    scene.append(row.scene);
    train_vs.append(row.train_vs_mean);
    eval_vs.append(row.eval_vs ? py::object(py::float_(*row.eval_vs)) : py::none());
  }
  py::dict out;
  out["method"] = method_name(method);
  out["epoch"] = epoch;
  out["scene"] = scene;
  out["train_vs_mean"] = train_vs;
  out["eval_vs"] = eval_vs;
  return out;
}

TrainConfig config_from_kwargs(int n_skills, int epochs, int scenes, std::uint64_t seed,
                               int episode_len, const std::string& kernel,
                               const std::string& transform, int eval_rollouts,
                               double learning_rate, int eval_every, int threads) {
  TrainConfig cfg;
  cfg.n_skills = n_skills;
  cfg.epochs = epochs;
  cfg.scenes = scenes;
  cfg.seed = seed;
  cfg.env.episode_len = episode_len;
  cfg.train_spec.terms = parse_kernel_terms(kernel);
  cfg.transform = parse_transform(transform);
  cfg.eval_spec.rollouts_per_skill = eval_rollouts;
  cfg.hyper.learning_rate = learning_rate;
  cfg.eval_every = eval_every > 0 ? eval_every : epochs + 1;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "VendiRL core: similarity-kernel skill-diversity scores and training loops";

  py::register_exception<Error>(m, "VendirlError");

  m.def(
      "vendi_score",
      [](const py::array_t<double>& kernel, bool clamp) {
        return vendi_score(KernelMatrix::from_sym(to_sym_matrix(kernel)),
                           clamp ? PsdPolicy::clamp_renormalize : PsdPolicy::strict);
      },
      py::arg("kernel"), py::arg("clamp") = false,
      "Exponential of the Shannon entropy of the eigenvalues of K/n, in [1, n].");

  m.def(
      "sym_eigenvalues",
      [](const py::array_t<double>& matrix) {
        EigenResult r = sym_eigenvalues(to_sym_matrix(matrix));
        return py::array_t<double>(static_cast<py::ssize_t>(r.eigenvalues.size()),
                                   r.eigenvalues.data());
      },
      py::arg("matrix"), "Eigenvalues of a symmetric matrix, descending.");

  m.def(
      "cholesky_logdet",
      [](const py::array_t<double>& matrix) { return cholesky_logdet(to_sym_matrix(matrix)); },
      py::arg("matrix"));

  m.def(
      "shannon_entropy",
      [](const std::vector<double>& p) { return shannon_entropy(p); }, py::arg("p"));

  m.def(
      "knn_f1",
      [](const py::array_t<double>& a, const py::array_t<double>& b, int k) {
        return knn_f1_similarity(SkillSample{{to_trajectory(a)}},
                                 SkillSample{{to_trajectory(b)}}, k);
      },
      py::arg("a"), py::arg("b"), py::arg("k") = 3,
      "kNN manifold-overlap F1 between two point sets (rows = observations).");

  m.def(
      "similarity",
      [](const std::string& kind, const std::vector<py::array_t<double>>& a,
         const std::vector<py::array_t<double>>& b, int knn_k,
         const std::string& mean_reference) {
        SkillSample sa = to_sample(a), sb = to_sample(b);
        switch (parse_kernel_kind(kind)) {
          case KernelKind::cosine_of_means:
            return cosine_similarity(sa, sb, parse_mean_reference(mean_reference));
          case KernelKind::mmd_linear:
            return mmd_linear_similarity(sa, sb, parse_mean_reference(mean_reference));
          case KernelKind::covariance_structure:
            return covariance_similarity(sa, sb);
          case KernelKind::knn_f1_overlap:
            return knn_f1_similarity(sa, sb, knn_k);
        }
        fail(ErrorCode::bad_parameter, "unknown kernel kind");
      },
      py::arg("kind"), py::arg("a"), py::arg("b"), py::arg("knn_k") = 3,
      py::arg("mean_reference") = "raw",
      "One base similarity between two skills, each a list of [T, D] trajectories.");

  m.def(
      "build_kernel_matrix",
      [](const std::vector<std::vector<py::array_t<double>>>& samples,
         const std::string& terms, int knn_k, const std::string& mean_reference,
         bool cosine_rescale, bool psd_clamp) {
        std::vector<SkillSample> converted;
        for (const auto& s : samples) converted.push_back(to_sample(s));
        SimilaritySpec spec =
            make_spec(terms, knn_k, 1, mean_reference, cosine_rescale, psd_clamp);
        KernelMatrix km = build_kernel_matrix(converted, spec);
        py::array_t<double> out({km.n(), km.n()});
        auto buf = out.mutable_unchecked<2>();
        for (int i = 0; i < km.n(); ++i)
          for (int j = 0; j < km.n(); ++j) buf(i, j) = km.sim.at(i, j);
        return out;
      },
      py::arg("samples"), py::arg("terms") = "mmd_linear:1.0", py::arg("knn_k") = 3,
      py::arg("mean_reference") = "relative_to_start", py::arg("cosine_rescale") = true,
      py::arg("psd_clamp") = false);

  m.def(
      "effective_unique_skills",
      [](const std::vector<std::vector<py::array_t<double>>>& samples,
         const std::string& terms, int knn_k, const std::string& mean_reference,
         bool cosine_rescale, bool psd_clamp) {
        std::vector<SkillSample> converted;
        for (const auto& s : samples) converted.push_back(to_sample(s));
        SimilaritySpec spec =
            make_spec(terms, knn_k, 1, mean_reference, cosine_rescale, psd_clamp);
        return effective_unique_skills(converted, spec);
      },
      py::arg("samples"), py::arg("terms") = "knn_f1_overlap:1.0", py::arg("knn_k") = 3,
      py::arg("mean_reference") = "relative_to_start", py::arg("cosine_rescale") = true,
      py::arg("psd_clamp") = true,
      "Vendi score of the kernel built from per-skill trajectory samples.");

  m.def(
      "train",
      [](const std::string& method, int n_skills, int epochs, int scenes,
         std::uint64_t seed, int episode_len, const std::string& kernel,
         const std::string& transform, int eval_rollouts, double learning_rate,
         int eval_every, int threads) {
        TrainConfig cfg =
            config_from_kwargs(n_skills, epochs, scenes, seed, episode_len, kernel,
                               transform, eval_rollouts, learning_rate, eval_every, threads);
        Method m_kind = parse_method(method);
        py::dict out;
        if (m_kind == Method::misl) {
          MislResult r = train_misl(cfg);
          out = log_to_dict(r.log, m_kind);
        } else if (m_kind == Method::vendirl) {
          TrainResult r = train(cfg);
          out = log_to_dict(r.log, m_kind);
        } else {
          fail(ErrorCode::config_error, "python train() supports vendirl|misl");
        }
        return out;
      },
      py::arg("method") = "vendirl", py::arg("n_skills") = 8, py::arg("epochs") = 50,
      py::arg("scenes") = 4, py::arg("seed") = 0, py::arg("episode_len") = 32,
      py::arg("kernel") = "mmd_linear:1.0", py::arg("transform") = "log_fraction",
      py::arg("eval_rollouts") = 5, py::arg("learning_rate") = 3e-4,
      py::arg("eval_every") = 0, py::arg("threads") = 1,
      "Run a training loop and return the metric log as a dict of columns.");

  m.def(
      "evaluate_policy",
      [](const std::string& checkpoint, std::uint64_t seed, int rollouts, int episode_len) {
        PolicySkillSet policy = PolicySkillSet::load(checkpoint);
        EnvConfig env;
        env.episode_len = episode_len;
        SimilaritySpec spec = TrainConfig::default_eval_spec();
        spec.rollouts_per_skill = rollouts;
        Rng rng = Rng::derive(seed, {kEvalStream});
        return evaluate_policy_vs(policy, env, spec, rng);
      },
      py::arg("checkpoint"), py::arg("seed") = 0, py::arg("rollouts") = 5,
      py::arg("episode_len") = 64,
      "Load a checkpoint and report its effective number of unique skills.");

  m.attr("__version__") = "0.1.0";
}
