#include "anep/lexicons.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "anep/digest.hpp"
#include "anep/entities.hpp"
#include "anep/errors.hpp"

using nlohmann::json;

namespace anep {

namespace {

void load_list(const json& doc, const char* key, std::set<std::string>& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_array()) throw Error(std::string("lexicons: \"") + key + "\" must be an array");
    for (const auto& item : doc[key]) out.insert(fold_key(item.get<std::string>()));
}

}  // namespace

Lexicons Lexicons::from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(std::string("lexicons: invalid JSON: ") + e.what());
    }
    Lexicons lex;
    load_list(doc, "honorifics", lex.honorifics_);
    load_list(doc, "particles", lex.particles_);
    load_list(doc, "stopwords", lex.stopwords_);
    load_list(doc, "given_names", lex.given_names_);
    load_list(doc, "surnames", lex.surnames_);
    // Digest of the folded content actually in force, independent of entry
    // order or casing in the source file.
    json canon;
    canon["honorifics"] = lex.honorifics_;
    canon["particles"] = lex.particles_;
    canon["stopwords"] = lex.stopwords_;
    canon["given_names"] = lex.given_names_;
    canon["surnames"] = lex.surnames_;
    lex.digest_ = sha256_hex(canon.dump());
    return lex;
}

Lexicons Lexicons::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("lexicons: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

Lexicons Lexicons::builtin_default() {
    // Mirrors data/lexicons.json. Seed lists, not reference data.
    return from_json(R"({
  "honorifics": ["mr","mrs","ms","miss","dr","prof","professor","sir","dame","lord","lady",
                 "president","vice-president","minister","prime","deputy","chancellor",
                 "senator","congressman","congresswoman","mayor","governor","judge","justice",
                 "captain","colonel","general","sergeant","bishop","archbishop","cardinal",
                 "pope","king","queen","prince","princess","sheikh","imam","rabbi",
                 "reverend","rev","hon","mp","mep"],
  "particles": ["de","del","della","di","da","dos","das","du","van","von","der","den",
                "ter","ten","la","le","al","el","bin","ibn","abu","mac"],
  "stopwords": ["a","an","and","the","of","in","on","at","to","for","with","from","by",
                "news","breaking","live","update","updates","latest","exclusive","alert",
                "today","tonight","morning","evening","daily","weather","sport","sports",
                "business","politics","world","local","national","election","report",
                "swift","trump","will","grace","rose","summer","hope","price","young",
                "strong","brown","white","black","green","king","bush","stone","wood",
                "field","hill","may","march","love","best","sharp","wise","savage","bolt"],
  "given_names": ["john","donald","boris","anna","maria","joseph","david","michael","sarah",
                  "james","robert","mary","peter","paul","george","taylor","mickey","emma",
                  "olivia","liam","noah","sophia","charlotte","amelia","lucas","elena",
                  "censu","guzeppi","karmenu","marija","pawlu","ganni"],
  "surnames": ["swift","trump","smith","johnson","borg","zahra","rourke","muscat","abela",
               "vella","farrugia","camilleri","galea","fenech","grech","attard","spiteri",
               "micallef","king","brown","white","young","price"]
})");
}

}  // namespace anep
