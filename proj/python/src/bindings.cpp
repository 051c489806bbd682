#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ecograde/core/band.hpp"
#include "ecograde/core/error.hpp"
#include "ecograde/core/serialize.hpp"
#include "ecograde/geo/geo.hpp"
#include "ecograde/ingest/epc_ingest.hpp"
#include "ecograde/match/epc_index.hpp"
#include "ecograde/score/engine.hpp"
#include "ecograde/service/api.hpp"
#include "ecograde/service/store.hpp"
#include "ecograde/stats/compare.hpp"
#include "ecograde/validate/run.hpp"
#include "ecograde/validate/synthetic.hpp"
#include "ecograde/validate/tost.hpp"

namespace py = pybind11;
using namespace ecograde;

namespace {

// Structured values cross the boundary as JSON so Python sees plain dicts and lists.
py::object to_python(const Json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

Json from_python(const py::handle& obj) {
    return Json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

template <typename T>
T from_python_as(const py::handle& obj, const char* what) {
    try {
        return from_python(obj).get<T>();
    } catch (const Json::exception& e) {
        throw py::value_error(std::string(what) + ": " + e.what());
    }
}

double band_score(const std::string& label) {
    auto band = parse_band(label);
    if (!band) throw py::value_error("unknown efficiency band '" + label + "'");
    return band_to_score(*band);
}

py::dict co2(double kwh_mean, double kwh_min, double kwh_max, double floor_area, bool gas_heated,
             std::optional<double> electricity_kg_per_kwh, std::optional<double> gas_kg_per_kwh) {
    ConversionFactors factors;
    if (electricity_kg_per_kwh) factors.electricity_kg_per_kwh = electricity_kg_per_kwh;
    if (gas_kg_per_kwh) factors.gas_kg_per_kwh = gas_kg_per_kwh;
    factors.validate();
    Co2Estimate e = co2_estimate({kwh_mean, kwh_min, kwh_max}, floor_area, factors,
                                 gas_heated ? FuelMix::gas_heated() : FuelMix::electricity_only());
    py::dict out;
    out["avg"] = e.avg;
    out["low"] = e.low;
    out["high"] = e.high;
    return out;
}

py::object tost(const std::vector<double>& g1, const std::vector<double>& g2, double margin, double alpha) {
    return to_python(Json(tost_equivalence(g1, g2, margin, alpha)));
}

py::object validation(std::uint64_t seed, int cities, int addresses, double inject_shift) {
    if (cities < 1 || cities > 10) throw py::value_error("cities must be between 1 and 10");
    auto params = default_cities(seed, addresses);
    params.resize(static_cast<std::size_t>(cities));
    ValidationOptions options;
    options.inject_shift = inject_shift;
    ValidationReport report;
    {
        py::gil_scoped_release release;
        report = run_validation(params, options);
    }
    return to_python(summary_json(report));
}

py::object score(const py::list& listings, const py::list& certificates, const py::object& calibration,
                 int min_similar) {
    std::vector<Listing> ls;
    for (const auto& l : listings) ls.push_back(from_python_as<Listing>(l, "listing"));
    std::vector<EpcRecord> certs;
    for (const auto& c : certificates) certs.push_back(from_python_as<EpcRecord>(c, "certificate"));
    ScoringContext ctx;
    if (!calibration.is_none()) {
        ctx.calibration = from_python_as<ScoreCalibration>(calibration, "calibration");
        ctx.calibration.validate();
    }
    EpcIndex index(dedupe_by_address(clean_records(std::move(certs)).kept));
    const auto bedrooms = BedroomLookupTable::defaults();
    ctx.index = &index;
    ctx.bedrooms = &bedrooms;
    ctx.min_similar = min_similar;
    BatchScores batch = score_all(ls, ctx);
    Json diagnostics = Json::array();
    for (const auto& d : batch.diagnostics) diagnostics.push_back({{"listing_id", d.listing_id}, {"reason", d.reason}});
    return to_python(Json{{"reports", batch.reports}, {"diagnostics", std::move(diagnostics)}});
}

// Read-only view of a scored store, answering the same requests as the HTTP service.
class Service {
public:
    Service(const std::filesystem::path& store_dir, std::optional<std::filesystem::path> scores_dir)
        : api_(store_) {
        store_.publish(load_store({store_dir, scores_dir.value_or(store_dir)}));
    }

    py::tuple get(const std::string& path, const std::map<std::string, std::string>& query) const {
        ApiResponse r = api_.handle("GET", path, query);
        return py::make_tuple(r.status, to_python(r.body));
    }

    std::string fingerprint() const { return store_.snapshot()->fingerprint(); }

private:
    Store store_;
    Api api_;
};

}  // namespace

PYBIND11_MODULE(_ecograde, m) {
    m.doc() = "EcoGrade scoring, statistics and validation";
    m.attr("__version__") = ECOGRADE_VERSION;

    // Owned by the module for the life of the interpreter.
    static PyObject* error = py::exception<Error>(m, "EcoGradeError", PyExc_ValueError).release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    m.def("band_to_score", &band_score, py::arg("label"), "Score in [0,1] for a certificate band label.");
    m.def("haversine_km",
          [](double lat1, double lon1, double lat2, double lon2) {
              return haversine_km(GeoPoint::make(lat1, lon1), GeoPoint::make(lat2, lon2));
          },
          py::arg("lat1"), py::arg("lon1"), py::arg("lat2"), py::arg("lon2"));
    m.def("walking_time_hours", &walking_time_hours, py::arg("distance_km"));

    m.def("consumption_factor",
          [](double kwh, double kwh_cap) {
              ScoreCalibration c;
              c.kwh_cap = kwh_cap;
              c.validate();
              return consumption_factor(kwh, c);
          },
          py::arg("kwh_per_m2"), py::arg("kwh_cap") = 500.0);
    m.def("efficiency_factor",
          [](const std::vector<std::optional<double>>& scores) { return efficiency_factor(scores); },
          py::arg("attribute_scores"));
    m.def("supplier_factor",
          [](std::optional<double> renewable_fraction, bool gas_main_heat) {
              if (!renewable_fraction) return supplier_factor(std::nullopt);
              return supplier_factor(Tariff{*renewable_fraction, gas_main_heat});
          },
          py::arg("renewable_fraction"), py::arg("gas_main_heat") = false);
    m.def("transport_factor",
          [](double hours, double walk_cap_hours) {
              ScoreCalibration c;
              c.walk_cap_hours = walk_cap_hours;
              c.validate();
              return transport_factor(hours, c);
          },
          py::arg("mean_time_hours"), py::arg("walk_cap_hours") = 1.0);
    m.def("to_leaf_scale", &to_leaf_scale, py::arg("x"), py::arg("beta") = 9.0);
    m.def("ecograde",
          [](const std::vector<std::optional<double>>& factors) {
              if (factors.size() != kFactorCount) throw py::value_error("expected four factor scores");
              FactorScores scores{};
              std::copy(factors.begin(), factors.end(), scores.begin());
              return ecograde::ecograde(scores);
          },
          py::arg("factor_scores"), "Mean of the present leaf-scale factor scores.");
    m.def("leaves_for", [](double overall) { return leaves_for(overall); }, py::arg("overall"));
    m.def("co2_estimate", &co2, py::arg("kwh_mean"), py::arg("kwh_min"), py::arg("kwh_max"),
          py::arg("floor_area"), py::arg("gas_heated") = false, py::arg("electricity_kg_per_kwh") = py::none(),
          py::arg("gas_kg_per_kwh") = py::none());

    m.def("cohens_d",
          [](double mu_a, double sigma_a, int n_a, double mu_c, double sigma_c, int n_c) {
              return cohens_d({mu_a, sigma_a, n_a}, {mu_c, sigma_c, n_c});
          },
          py::arg("mu_a"), py::arg("sigma_a"), py::arg("n_a"), py::arg("mu_c"), py::arg("sigma_c"), py::arg("n_c"));
    m.def("cohens_d_percent", &cohens_d_percent, py::arg("d"));
    m.def("emissions_label",
          [](double mu, double sigma, int n, const std::string& city, int bed_type, double c_mu, double c_sigma,
             int c_n) {
              return comparison_text(emissions_comparison({mu, sigma, n}, CityBaseline{city, bed_type, c_mu, c_sigma, c_n}));
          },
          py::arg("mu"), py::arg("sigma"), py::arg("n"), py::arg("city"), py::arg("bed_type"), py::arg("c_mu"),
          py::arg("c_sigma"), py::arg("c_n"));
    m.def("tost_equivalence", &tost, py::arg("g1"), py::arg("g2"), py::arg("margin") = 0.1, py::arg("alpha") = 0.05);

    m.def("run_validation", &validation, py::arg("seed") = 20240101, py::arg("cities") = 10,
          py::arg("addresses") = 1000, py::arg("inject_shift") = 0.0,
          "Synthetic interpolated-versus-direct comparison; returns the run summary.");
    m.def("score", &score, py::arg("listings"), py::arg("certificates"), py::arg("calibration") = py::none(),
          py::arg("min_similar") = kDefaultMinSimilar,
          "Clean, deduplicate and index the certificates, then score every listing.");

    py::class_<Service>(m, "Service")
        .def(py::init<const std::filesystem::path&, std::optional<std::filesystem::path>>(), py::arg("store_dir"),
             py::arg("scores_dir") = py::none())
        .def("get", &Service::get, py::arg("path"), py::arg("query") = std::map<std::string, std::string>{},
             "Returns (status, body) for a /v1 request.")
        .def_property_readonly("fingerprint", &Service::fingerprint);
}
