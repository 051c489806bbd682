#include "ecograde/validate/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "ecograde/core/address.hpp"
#include "ecograde/core/error.hpp"

namespace ecograde {
namespace {

constexpr double kKmPerDegree = 111.195;

constexpr const char* kStreets[] = {
    "ELM ROAD",      "STATION ROAD", "CHURCH STREET", "MILL LANE",    "PARK AVENUE",
    "VICTORIA ROAD", "GROVE TERRACE", "QUEENS ROAD",  "HIGH STREET",  "CASTLE WAY",
    "NORTH STREET",  "ALBERT ROAD",  "MANOR CLOSE",   "WILLOW COURT", "KINGS DRIVE",
    "BRIDGE STREET", "ORCHARD WAY",  "CHAPEL ROW",    "HILL RISE",    "MEADOW VIEW",
};
constexpr std::size_t kStreetCount = sizeof(kStreets) / sizeof(kStreets[0]);

// Per-attribute shift relative to dwelling quality (hot water, floor,
// windows, walls, secondary heating, roof, main heat, controls, lighting).
constexpr std::array<double, kAttributeCount> kAttributeOffset = {
    0.05, -0.05, 0.10, -0.05, 0.0, 0.0, 0.05, 0.05, 0.20};

struct Postcode {
    std::string code;
    std::string street;
    double lat = 0.0;
    double lon = 0.0;
    double quality = 0.0;
    int next_dwelling = 0;
};

struct Dwelling {
    std::string address;
    const Postcode* postcode = nullptr;
    double lat = 0.0;
    double lon = 0.0;
    int bedrooms = 0;
    EpcRecord certificate;
};

GeoPoint offset_km(double lat, double lon, double north_km, double east_km) {
    double new_lat = std::clamp(lat + north_km / kKmPerDegree, -89.9, 89.9);
    double new_lon = lon + east_km / (kKmPerDegree * std::cos(lat * std::numbers::pi / 180.0));
    if (new_lon > 180.0) new_lon -= 360.0;
    if (new_lon < -180.0) new_lon += 360.0;
    return {new_lat, new_lon};
}

char rating_for(double kwh) {
    if (kwh < 100) return 'A';
    if (kwh < 150) return 'B';
    if (kwh < 200) return 'C';
    if (kwh < 260) return 'D';
    if (kwh < 330) return 'E';
    if (kwh < 400) return 'F';
    return 'G';
}

std::string inward_code(int k) {
    std::string s;
    s.push_back(static_cast<char>('1' + k % 9));
    s.push_back(static_cast<char>('A' + (k / 9) % 26));
    s.push_back(static_cast<char>('A' + (k / 234) % 26));
    return s;
}

class CityBuilder {
public:
    CityBuilder(const SyntheticCityParams& p, const BedroomLookupTable& table)
        : p_(p), table_(table), rng_(mix_seed(p.seed)) {}

    SyntheticCity build() {
        SyntheticCity city;
        city.name = p_.name;
        make_postcodes();

        std::vector<Dwelling> background;
        for (auto& pc : postcodes_) {
            for (int i = 0; i < p_.dwellings_per_postcode; ++i) {
                background.push_back(make_dwelling(pc));
            }
        }

        std::vector<Dwelling> listed;
        for (int i = 0; i < p_.n_addresses; ++i) {
            listed.push_back(make_dwelling(postcodes_[rng_.index(postcodes_.size())]));
        }

        // Exactly round(coverage * n) listings get their own certificate.
        std::vector<std::size_t> order(listed.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng_.index(i)]);
        }
        const auto certified =
            static_cast<std::size_t>(std::llround(p_.epc_coverage_fraction * static_cast<double>(listed.size())));

        for (std::size_t i = 0; i < listed.size(); ++i) {
            const Dwelling& d = listed[i];
            Listing l;
            char id[64];
            std::snprintf(id, sizeof id, "%s-%04zu", p_.outward_prefix.c_str(), i + 1);
            l.id = id;
            l.address_key = normalize_address(d.address);
            l.postcode = d.postcode->code;
            l.latitude = d.lat;
            l.longitude = d.lon;
            l.bedrooms = d.bedrooms;
            l.city = p_.name;
            char supplier[64];
            std::snprintf(supplier, sizeof supplier, "%s-S%02zu", p_.outward_prefix.c_str(), i % 25);
            l.supplier_id = supplier;
            if (rng_.bernoulli(p_.tariff_fraction)) {
                double renewable = std::round(rng_.uniform() * 100.0) / 100.0;
                l.tariff = Tariff{renewable, d.certificate.gas_main_heat};
            }
            city.listings.push_back(std::move(l));
        }
        for (std::size_t k = 0; k < certified; ++k) {
            std::size_t i = order[k];
            city.certified_listings.insert(city.listings[i].id);
            city.certificates.push_back(listed[i].certificate);
        }
        for (auto& d : background) {
            city.certificates.push_back(std::move(d.certificate));
        }

        add_superseded(city.certificates);
        add_anomalies(city.certificates);
        city.transport = make_transport();
        return city;
    }

private:
    void make_postcodes() {
        const double two_pi = 2.0 * std::numbers::pi;
        for (int d = 0; d < p_.districts; ++d) {
            double angle = two_pi * d / p_.districts + rng_.normal(0.0, 0.3);
            double dist = p_.radius_km * 0.75 * std::sqrt(rng_.uniform());
            GeoPoint center = offset_km(p_.center_lat, p_.center_lon, dist * std::cos(angle), dist * std::sin(angle));
            double district_quality = rng_.normal(0.0, p_.district_sd);
            std::string outward = p_.outward_prefix + std::to_string(d + 1);
            for (int k = 0; k < p_.postcodes_per_district; ++k) {
                Postcode pc;
                pc.code = normalize_postcode(outward + " " + inward_code(k));
                pc.street = kStreets[(static_cast<std::size_t>(d) * 7 + static_cast<std::size_t>(k)) % kStreetCount];
                GeoPoint where = offset_km(center.lat, center.lon, rng_.normal(0.0, p_.radius_km * 0.1),
                                           rng_.normal(0.0, p_.radius_km * 0.1));
                pc.lat = where.lat;
                pc.lon = where.lon;
                pc.quality = p_.quality_mean + district_quality + rng_.normal(0.0, p_.postcode_sd);
                postcodes_.push_back(std::move(pc));
            }
        }
    }

    int draw_bedrooms() {
        double u = rng_.uniform();
        double acc = 0.0;
        for (int b = 0; b < 6; ++b) {
            acc += p_.bedroom_mix[b];
            if (u < acc) return b;
        }
        return 5;
    }

    double draw_area(int bedrooms) {
        const auto& rows = table_.rows(p_.name);
        const BedroomRow* row = nullptr;
        for (const auto& r : rows) {
            if (r.bedrooms == bedrooms) {
                row = &r;
                break;
            }
        }
        if (!row) {
            fail(ErrorCode::Config, "bedroom table for " + p_.name + " lacks a " + std::to_string(bedrooms) + "-bed row");
        }
        double lo = std::max(row->area_low, 22.0);
        double hi = std::min(row->area_high, row->area_low + 70.0);
        double area = std::floor(rng_.uniform(lo, hi) * 10.0) / 10.0;
        return std::max(area, lo);
    }

    Date draw_date(int first_year, int last_year) {
        Date d;
        d.year = first_year + static_cast<int>(rng_.index(static_cast<std::size_t>(last_year - first_year + 1)));
        d.month = 1 + static_cast<int>(rng_.index(12));
        d.day = 1 + static_cast<int>(rng_.index(28));
        return d;
    }

    EpcRecord make_certificate(const std::string& address, const std::string& postcode, int bedrooms, double quality) {
        EpcRecord r;
        r.address_key = normalize_address(address);
        r.postcode = postcode;
        r.floor_area = draw_area(bedrooms);
        double kwh = p_.kwh_at_worst + (p_.kwh_at_best - p_.kwh_at_worst) * quality - 8.0 * bedrooms +
                     rng_.normal(0.0, p_.kwh_noise_sd);
        r.kwh_per_m2 = std::round(std::clamp(kwh, 20.0, 495.0));
        for (EpcAttribute a : kAllAttributes) {
            double s = quality + kAttributeOffset[index_of(a)] + rng_.normal(0.0, p_.attribute_noise_sd);
            bool absent = (a == EpcAttribute::Roof && bedrooms <= 2 && rng_.bernoulli(0.4)) ||
                          (a == EpcAttribute::SecondaryHeating && rng_.bernoulli(0.6)) ||
                          (a == EpcAttribute::Floor && rng_.bernoulli(0.3));
            if (!absent) {
                int step = static_cast<int>(std::lround(std::clamp(s, 0.0, 1.0) * 4.0));
                r.bands[index_of(a)] = static_cast<EfficiencyBand>(step);
            }
        }
        r.headline_rating = rating_for(r.kwh_per_m2);
        r.gas_main_heat = rng_.bernoulli(p_.gas_share);
        r.lodgement_date = draw_date(2013, 2023);
        return r;
    }

    Dwelling make_dwelling(Postcode& pc) {
        Dwelling d;
        int j = pc.next_dwelling++;
        d.address = "Flat " + std::to_string(1 + j % 4) + ", " + std::to_string(1 + j / 4) + " " + pc.street;
        d.postcode = &pc;
        GeoPoint where = offset_km(pc.lat, pc.lon, rng_.normal(0.0, 0.05), rng_.normal(0.0, 0.05));
        d.lat = where.lat;
        d.lon = where.lon;
        d.bedrooms = draw_bedrooms();
        double quality = std::clamp(pc.quality + rng_.normal(0.0, p_.dwelling_sd), 0.0, 1.0);
        d.certificate = make_certificate(d.address, pc.code, d.bedrooms, quality);
        return d;
    }

    // Older certificates for the same dwelling; deduplication must drop them.
    void add_superseded(std::vector<EpcRecord>& certs) {
        const std::size_t n = certs.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (!rng_.bernoulli(p_.duplicate_fraction)) continue;
            EpcRecord old = certs[i];
            old.lodgement_date.year -= 1 + static_cast<int>(rng_.index(5));
            old.kwh_per_m2 = std::min(495.0, old.kwh_per_m2 + 40.0);
            old.headline_rating = rating_for(old.kwh_per_m2);
            certs.push_back(std::move(old));
        }
    }

    // Data-entry errors on otherwise unlisted dwellings; cleaning must reject them.
    void add_anomalies(std::vector<EpcRecord>& certs) {
        const auto count = static_cast<std::size_t>(std::llround(p_.anomaly_fraction * static_cast<double>(certs.size())));
        for (std::size_t k = 0; k < count; ++k) {
            Postcode& pc = postcodes_[rng_.index(postcodes_.size())];
            Dwelling d = make_dwelling(pc);
            if (k % 2 == 0) {
                d.certificate.floor_area = 3.0;
            } else {
                d.certificate.headline_rating = 'B';
                d.certificate.kwh_per_m2 = 650.0;
            }
            certs.push_back(std::move(d.certificate));
        }
    }

    TransportPoint scatter(TransportMode mode, double spread_km) {
        GeoPoint where = offset_km(p_.center_lat, p_.center_lon, rng_.normal(0.0, spread_km),
                                   rng_.normal(0.0, spread_km));
        return {where, mode, std::nullopt};
    }

    TransportData make_transport() {
        TransportData t;
        const double spread = p_.radius_km * p_.transport_spread;
        for (int i = 0; i < p_.metro_stations; ++i) t.fixed.push_back(scatter(TransportMode::MetroStation, spread));
        for (int i = 0; i < p_.bus_stops; ++i) t.fixed.push_back(scatter(TransportMode::BusStop, spread * 1.5));
        for (int i = 0; i < p_.bike_docks; ++i) t.fixed.push_back(scatter(TransportMode::BikeShare, spread * 0.7));
        for (int s = 0; s < p_.snapshots; ++s) {
            char stamp[32];
            std::snprintf(stamp, sizeof stamp, "2024-03-%02dT%02d00", 4 + s, 8 + (s * 5) % 12);
            Snapshot snap{stamp, {}};
            for (int i = 0; i < p_.scooters_per_snapshot; ++i) {
                auto p = scatter(TransportMode::EScooter, spread);
                p.observed_at = snap.captured_at;
                snap.points.push_back(p);
            }
            for (int i = 0; i < p_.car_share_bays; ++i) {
                auto p = scatter(TransportMode::CarShare, spread * 1.2);
                p.observed_at = snap.captured_at;
                snap.points.push_back(p);
            }
            t.snapshots.push_back(std::move(snap));
        }
        return t;
    }

    const SyntheticCityParams& p_;
    const BedroomLookupTable& table_;
    Rng rng_;
    std::vector<Postcode> postcodes_;
};

}  // namespace

void SyntheticCityParams::validate() const {
    auto fraction = [](double f) { return f >= 0.0 && f <= 1.0; };
    if (!fraction(epc_coverage_fraction) || !fraction(duplicate_fraction) || !fraction(anomaly_fraction) ||
        !fraction(gas_share) || !fraction(tariff_fraction)) {
        fail(ErrorCode::Config, "fractions must lie in [0,1]");
    }
    if (n_addresses < 0 || districts < 1 || postcodes_per_district < 1 || dwellings_per_postcode < 0 ||
        snapshots < 0 || metro_stations < 0 || bus_stops < 0 || bike_docks < 0 || car_share_bays < 0 ||
        scooters_per_snapshot < 0) {
        fail(ErrorCode::Config, "counts must be non-negative (districts and postcodes positive)");
    }
    if (postcodes_per_district > 9 * 26 * 26) {
        fail(ErrorCode::Config, "too many postcodes per district");
    }
    if (!(radius_km > 0.0) || center_lat < -90.0 || center_lat > 90.0 || center_lon < -180.0 || center_lon > 180.0) {
        fail(ErrorCode::Config, "invalid city geometry");
    }
    double mix = 0.0;
    for (double m : bedroom_mix) {
        if (m < 0.0) fail(ErrorCode::Config, "bedroom mix must be non-negative");
        mix += m;
    }
    if (std::fabs(mix - 1.0) > 1e-9) {
        fail(ErrorCode::Config, "bedroom mix must sum to 1");
    }
    if (outward_prefix.empty()) {
        fail(ErrorCode::Config, "outward prefix must not be empty");
    }
}

std::vector<SyntheticCityParams> default_cities(std::uint64_t base_seed, int n_addresses) {
    struct Profile {
        const char* name;
        double lat, lon;
        const char* prefix;
        double quality, district_sd, postcode_sd, transport_spread;
        int metro, bus, bikes, scooters;
    };
    // Older housing stock sits around quality 0.11; London and Milton Keynes
    // are newer and wider spread, London with dense transport.
    static constexpr Profile kProfiles[] = {
        {"Birmingham", 52.4862, -1.8904, "B", 0.10, 0.02, 0.03, 0.35, 6, 40, 10, 20},
        {"Bristol", 51.4545, -2.5879, "BS", 0.14, 0.04, 0.05, 0.45, 6, 50, 20, 30},
        {"Cardiff", 51.4816, -3.1791, "CF", 0.12, 0.04, 0.05, 0.40, 5, 40, 15, 20},
        {"Edinburgh", 55.9533, -3.1883, "EH", 0.15, 0.04, 0.05, 0.45, 6, 60, 20, 30},
        {"Glasgow", 55.8642, -4.2518, "G", 0.11, 0.04, 0.05, 0.40, 10, 50, 15, 20},
        {"London", 51.5074, -0.1278, "SE", 0.20, 0.08, 0.07, 0.70, 25, 120, 60, 80},
        {"Manchester", 53.4808, -2.2426, "M", 0.13, 0.04, 0.05, 0.45, 10, 60, 20, 30},
        {"Milton Keynes", 52.0406, -0.7594, "MK", 0.22, 0.05, 0.05, 0.50, 4, 60, 25, 40},
        {"Newcastle", 54.9783, -1.6178, "NE", 0.11, 0.04, 0.05, 0.40, 10, 45, 12, 20},
        {"Nottingham", 52.9548, -1.1581, "NG", 0.12, 0.04, 0.05, 0.40, 6, 45, 12, 20},
    };
    std::vector<SyntheticCityParams> out;
    std::uint64_t i = 0;
    for (const auto& p : kProfiles) {
        SyntheticCityParams c;
        c.name = p.name;
        c.seed = mix_seed(base_seed + 0x1000 * ++i);
        c.n_addresses = n_addresses;
        c.center_lat = p.lat;
        c.center_lon = p.lon;
        c.outward_prefix = p.prefix;
        c.quality_mean = p.quality;
        c.district_sd = p.district_sd;
        c.postcode_sd = p.postcode_sd;
        c.transport_spread = p.transport_spread;
        c.metro_stations = p.metro;
        c.bus_stops = p.bus;
        c.bike_docks = p.bikes;
        c.scooters_per_snapshot = p.scooters;
        out.push_back(std::move(c));
    }
    return out;
}

SyntheticCity generate_city(const SyntheticCityParams& params, const BedroomLookupTable& bedrooms) {
    params.validate();
    if (!bedrooms.has_city(params.name)) {
        fail(ErrorCode::Config, "no bedroom table for synthetic city " + params.name);
    }
    return CityBuilder(params, bedrooms).build();
}

double assign_random_area(std::span<const EpcRecord> neighbors, Rng& rng) {
    if (neighbors.empty()) {
        fail(ErrorCode::NoComparableData, "no neighbors to draw a floor area from");
    }
    double lo = neighbors.front().floor_area;
    double hi = lo;
    for (const auto& n : neighbors) {
        lo = std::min(lo, n.floor_area);
        hi = std::max(hi, n.floor_area);
    }
    if (lo == hi) {
        return lo;
    }
    return lo + (hi - lo) * rng.uniform();
}

}  // namespace ecograde
