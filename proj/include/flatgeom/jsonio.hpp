// JSON schemas for surfaces, models, families and products, plus the
// deterministic number formatting used by every CSV the tools emit.
#pragma once

#include "flatgeom/degeneration.hpp"
#include "flatgeom/multicomponent.hpp"

#include <json.hpp>

#include <string>

namespace flatgeom {

using Json = nlohmann::json;

// 15 significant digits; the same bytes for the same double every time
std::string fmt_num(double x);
std::string fmt_complex(const Vec2<double>& z);

// { "polygons": [[[re,im],...],...], "gluings": [[[p,e],[q,f]],...] }
// Numbers may be JSON numbers or exact "p/q" strings.
PolygonSurface<double> surface_from_json(const Json& j);
PolygonSurface<Rat> surface_from_json_exact(const Json& j);
Json surface_to_json(const PolygonSurface<double>& s);
Json surface_to_json(const PolygonSurface<Rat>& s);

// model block: { "span": [[re,im,...], ...] } or { "equations": [...] },
// rows interleaving re and im per coordinate (length 2 * ambient)
template <class R> CMat<R> model_rows_from_json(const Json& rows_json, int ambient);
LocalModel<double> model_from_json(const Json& j, int ambient);

// family file: surface fields plus eps0 / schedule / optional collapse
Family family_from_json(const Json& j);
Json family_to_json(const Family& fam);

// product file: { "components": [surface...], "model": {...} }
ProductModel<double> product_model_from_json(const Json& j);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

} // namespace flatgeom
