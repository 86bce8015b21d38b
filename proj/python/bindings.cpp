// Copyright 2026 The RAIL Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

#include "rail/diagnostics.hpp"
#include "rail/dual_adapter.hpp"
#include "rail/embedding_store.hpp"
#include "rail/error.hpp"
#include "rail/fusion.hpp"
#include "rail/metrics.hpp"
#include "rail/primal_adapter.hpp"
#include "rail/projection.hpp"
#include "rail/protocol.hpp"
#include "rail/report.hpp"
#include "rail/synthetic.hpp"

namespace py = pybind11;

namespace {

py::dict metrics_dict(const rail::Metrics& m) {
  py::dict d;
  d["transfer"] = m.transfer ? py::cast(*m.transfer) : py::none();
  d["average"] = m.average;
  d["last"] = m.last;
  py::list per;
  for (const auto& x : m.per_domain) {
    py::dict e;
    e["domain"] = x.domain;
    e["transfer"] = x.transfer ? py::cast(*x.transfer) : py::none();
    e["average"] = x.average;
    e["last"] = x.last;
    per.append(e);
  }
  d["per_domain"] = per;
  return d;
}

rail::MetricMatrix make_matrix(const rail::Matrix& acc, std::vector<std::string> names) {
  rail::MetricMatrix m{acc, std::move(names)};
  if (m.domain_order.empty()) {
    for (Eigen::Index j = 0; j < acc.cols(); ++j) m.domain_order.push_back("domain" + std::to_string(j));
  }
  return m;
}

}  // namespace

PYBIND11_MODULE(_rail, m) {
  m.doc() = "Analytic incremental adapters over frozen embeddings";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> storage;
  storage.call_once_and_store_result(
      [&]() { return py::object(py::exception<rail::Error>(m, "RailError", PyExc_RuntimeError)); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const rail::Error& e) {
      const py::object& type = storage.get_stored();
      py::object err = type(py::str(e.what()));
      err.attr("code") = std::string(rail::to_string(e.code()));
      err.attr("row") = e.row() ? py::cast(*e.row()) : py::none();
      PyErr_SetObject(type.ptr(), err.ptr());
    }
  });

  py::enum_<rail::SplitRole>(m, "SplitRole")
      .value("TRAIN", rail::SplitRole::kTrain)
      .value("TEST", rail::SplitRole::kTest)
      .value("TEXT", rail::SplitRole::kText);

  py::class_<rail::EmbeddingDataset>(m, "EmbeddingDataset")
      .def(py::init<>())
      .def_readwrite("domain_name", &rail::EmbeddingDataset::domain_name)
      .def_readwrite("features", &rail::EmbeddingDataset::features)
      .def_readwrite("labels", &rail::EmbeddingDataset::labels)
      .def_readwrite("class_names", &rail::EmbeddingDataset::class_names)
      .def_readwrite("role", &rail::EmbeddingDataset::role)
      .def_readwrite("normalized", &rail::EmbeddingDataset::normalized)
      .def("validate", &rail::EmbeddingDataset::validate)
      .def("__len__", &rail::EmbeddingDataset::size);

  m.def("save_embeddings", &rail::save_embeddings, py::arg("path"), py::arg("dataset"));
  m.def(
      "load_embeddings",
      [](const std::filesystem::path& path, bool normalize) {
        return rail::load_embeddings(path, rail::LoadOptions{normalize});
      },
      py::arg("path"), py::arg("normalize") = true);
  m.def("sample_few_shot", &rail::sample_few_shot, py::arg("dataset"), py::arg("shots"),
        py::arg("seed"));

  m.def(
      "synthesize",
      [](int n_domains, int classes_per_domain, int samples_per_class, int dim, double noise,
         double separation, double shared_component, double domain_coherence, std::uint64_t seed) {
        rail::SynthSpec spec;
        spec.n_domains = n_domains;
        spec.classes_per_domain = classes_per_domain;
        spec.samples_per_class = samples_per_class;
        spec.dim = dim;
        spec.noise = noise;
        spec.separation = separation;
        spec.shared_component = shared_component;
        spec.domain_coherence = domain_coherence;
        spec.seed = seed;
        py::list out;
        for (auto& d : rail::synthesize_domains(spec)) {
          out.append(py::make_tuple(d.train, d.test, d.text));
        }
        return out;
      },
      py::arg("n_domains") = 3, py::arg("classes_per_domain") = 4, py::arg("samples_per_class") = 20,
      py::arg("dim") = 16, py::arg("noise") = 0.1, py::arg("separation") = 0.0,
      py::arg("shared_component") = 0.0, py::arg("domain_coherence") = 0.0, py::arg("seed") = 0);

  m.def(
      "kernel_matrix",
      [](const rail::Matrix& a, const rail::Matrix& b, const std::string& kind, double gamma) {
        return rail::kernel_matrix(a, b, rail::KernelSpec{rail::kernel_kind_from_string(kind), gamma});
      },
      py::arg("a"), py::arg("b"), py::arg("kind") = "rbf", py::arg("gamma") = 1.0);
  m.def(
      "rhl_project",
      [](const rail::Matrix& x, int hidden_dim, std::uint64_t seed) {
        rail::RhlParams params{seed, static_cast<int>(x.cols()), hidden_dim, rail::Activation::kRelu};
        return rail::FeatureMap::random_hidden_layer(params).project(x);
      },
      py::arg("x"), py::arg("hidden_dim"), py::arg("seed") = 0);

  py::class_<rail::Adapter>(m, "Adapter")
      .def(
          "learn",
          [](rail::Adapter& a, const rail::Matrix& x, const std::vector<int>& labels,
             const std::vector<int>& classes, const rail::Matrix& class_text) {
            a.learn(x, labels, classes, class_text);
          },
          py::arg("features"), py::arg("labels"), py::arg("classes"),
          py::arg("class_text") = rail::Matrix())
      .def("predict", &rail::Adapter::predict, py::arg("features"))
      .def("class_weights", &rail::Adapter::class_weights)
      .def_property_readonly("learned_classes", &rail::Adapter::learned_classes);

  py::class_<rail::PrimalAdapter, rail::Adapter>(m, "PrimalAdapter")
      .def(py::init([](double lambda, int input_dim, int rhl_dim, std::uint64_t rhl_seed) {
             auto map = rhl_dim <= 0 ? rail::FeatureMap::identity(input_dim)
                                     : rail::FeatureMap::random_hidden_layer(rail::RhlParams{
                                           rhl_seed, input_dim, rhl_dim, rail::Activation::kRelu});
             return rail::PrimalAdapter(std::move(map), lambda);
           }),
           py::arg("lam"), py::arg("input_dim"), py::arg("rhl_dim") = 0, py::arg("rhl_seed") = 0)
      .def_property_readonly("weights", &rail::PrimalAdapter::weights)
      .def_property_readonly("memory", &rail::PrimalAdapter::memory)
      .def("save", &rail::PrimalAdapter::save)
      .def_static("load", &rail::PrimalAdapter::load);

  py::class_<rail::DualAdapter, rail::Adapter>(m, "DualAdapter")
      .def(py::init([](double lambda, const std::string& kernel, double gamma) {
             return rail::DualAdapter(rail::KernelSpec{rail::kernel_kind_from_string(kernel), gamma},
                                      lambda);
           }),
           py::arg("lam"), py::arg("kernel") = "rbf", py::arg("gamma") = 1.0)
      .def_property_readonly("gram", &rail::DualAdapter::gram)
      .def_property_readonly("alpha", &rail::DualAdapter::alpha)
      .def_property_readonly("prototypes", &rail::DualAdapter::prototypes)
      .def("save", &rail::DualAdapter::save)
      .def_static("load", &rail::DualAdapter::load);

  m.def(
      "zero_shot_probs",
      [](const rail::Matrix& images, const rail::Matrix& texts, double logit_scale) {
        return rail::zero_shot_probs(images, texts, logit_scale);
      },
      py::arg("images"), py::arg("texts"), py::arg("logit_scale") = 100.0);

  m.def(
      "compute_metrics",
      [](const rail::Matrix& acc, std::vector<std::string> names) {
        return metrics_dict(rail::compute_metrics(make_matrix(acc, std::move(names))));
      },
      py::arg("acc"), py::arg("domains") = std::vector<std::string>{});

  m.def("pearson", [](const rail::Vector& a, const rail::Vector& b) { return rail::pearson(a, b); });

  m.def(
      "run",
      [](const std::string& config_json) {
        const rail::RunConfig config = rail::config_from_json(config_json);
        const rail::Benchmark bench = rail::load_benchmark(config);
        return rail::result_to_json(config, rail::run_protocol(bench, config));
      },
      py::arg("config_json"), "Runs the protocol described by a JSON config; returns result JSON.");
}
