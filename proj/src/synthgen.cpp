#include "graphhop/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "graphhop/rng.hpp"
#include "graphhop/strings.hpp"

namespace graphhop {

// ---------------------------------------------------------------------------
// Triple store

TripleStore TripleStore::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GenerationError("cannot open triple file: " + path);
  std::vector<Triple> triples;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() != 3 || cols[0].empty() || cols[1].empty() || cols[2].empty()) {
      throw GenerationError("bad triple at " + path + ":" + std::to_string(lineno));
    }
    triples.push_back({cols[0], cols[1], cols[2]});
  }
  return from_triples(std::move(triples));
}

TripleStore TripleStore::from_triples(std::vector<Triple> triples) {
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  TripleStore store;
  store.triples_ = std::move(triples);
  for (size_t i = 0; i < store.triples_.size(); ++i) {
    const Triple& t = store.triples_[i];
    store.rel_tail_[{t.relation, t.tail}].push_back(i);
    store.entities_.insert(t.head);
    store.entities_.insert(t.tail);
  }
  return store;
}

std::vector<Triple> TripleStore::forward(const std::string& head,
                                         const std::string& relation) const {
  std::vector<Triple> out;
  Triple probe{head, relation, ""};
  for (auto it = std::lower_bound(triples_.begin(), triples_.end(), probe);
       it != triples_.end() && it->head == head && it->relation == relation; ++it) {
    out.push_back(*it);
  }
  return out;
}

std::vector<Triple> TripleStore::backward(const std::string& relation,
                                          const std::string& tail) const {
  std::vector<Triple> out;
  auto it = rel_tail_.find({relation, tail});
  if (it == rel_tail_.end()) return out;
  for (size_t idx : it->second) out.push_back(triples_[idx]);
  return out;
}

bool TripleStore::has_entity(const std::string& name) const {
  return entities_.count(name) > 0;
}

std::vector<size_t> TripleStore::by_head(const std::string& head) const {
  std::vector<size_t> out;
  Triple probe{head, "", ""};
  auto it = std::lower_bound(triples_.begin(), triples_.end(), probe);
  for (; it != triples_.end() && it->head == head; ++it) {
    out.push_back(static_cast<size_t>(it - triples_.begin()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config

void GenConfig::validate() const {
  if (n_instances < 1) throw std::invalid_argument("n_instances must be >= 1");
  if (db_size < 4) throw std::invalid_argument("db_size must be >= 4");
  double mix_sum = 0.0;
  for (const auto& [cls, p] : structure_mix) {
    (void)cls;
    if (p < 0.0) throw std::invalid_argument("structure_mix entries must be >= 0");
    mix_sum += p;
  }
  if (structure_mix.size() != 4 || std::abs(mix_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("structure_mix must cover all 4 classes and sum to 1");
  }
  double split_sum = split_ratio[0] + split_ratio[1] + split_ratio[2];
  if (std::abs(split_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split_ratio must sum to 1");
  }
  if (distractor_ratio <= 0.0 || distractor_ratio >= 1.0) {
    throw std::invalid_argument("distractor_ratio must lie in (0, 1)");
  }
  if (bundle_prob < 0.0 || bundle_prob > 1.0) {
    throw std::invalid_argument("bundle_prob must lie in [0, 1]");
  }
}

// ---------------------------------------------------------------------------
// Verbalization

namespace {

const std::vector<std::string>& templates_for(const std::string& relation) {
  static const std::map<std::string, std::vector<std::string>> kTemplates = {
      {"area", {"%h area is %t.", "%h has an area of %t.", "The area of %h is %t."}},
      {"population",
       {"%h has a population of %t.", "The population of %h is %t.",
        "%h population is %t."}},
      {"country",
       {"%h is located in %t.", "%h is a city in %t.", "%h lies within %t."}},
      {"hometown",
       {"%h's hometown is %t.", "The hometown of %h is %t.", "%h grew up in %t."}},
      {"spouse", {"%h is married to %t.", "%h's spouse is %t."}},
      {"profession", {"%h works as a %t.", "%h is a %t by profession."}},
      {"award received",
       {"%h won the %t.", "%h received the %t.", "%h was awarded the %t."}},
      {"award received (point in time)",
       {"%h received this award in %t.", "%h won this award in %t."}},
      {"director",
       {"%h was directed by %t.", "The director of %h is %t.",
        "%h is a film directed by %t."}},
      {"stars",
       {"%h stars %t.", "The film %h features %t.", "%t appears in %h."}},
      {"duration",
       {"%h has a duration of %t minutes.", "%h is %t minutes long.",
        "The film %h runs for %t minutes."}},
      {"genre", {"%h is a %t film.", "The genre of %h is %t."}},
      {"publication year",
       {"%h was released in %t.", "The film %h came out in %t."}},
  };
  static const std::vector<std::string> kGeneric = {"%h's %r is %t."};
  auto it = kTemplates.find(relation);
  return it == kTemplates.end() ? kGeneric : it->second;
}

std::string render_template(const std::string& tmpl, const Triple& t) {
  std::string out;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] == '%' && i + 1 < tmpl.size()) {
      switch (tmpl[i + 1]) {
        case 'h': out += t.head; ++i; continue;
        case 't': out += t.tail; ++i; continue;
        case 'r': out += t.relation; ++i; continue;
        default: break;
      }
    }
    out.push_back(tmpl[i]);
  }
  return out;
}

}  // namespace

std::string verbalize(const std::vector<Triple>& bundle, uint64_t seed) {
  if (bundle.empty() || bundle.size() > 3) {
    throw std::invalid_argument("verbalize expects 1..3 triples");
  }
  for (const Triple& t : bundle) {
    if (t.head != bundle.front().head) {
      throw std::invalid_argument("verbalize bundle must share one head entity");
    }
  }
  Rng rng(derive_seed(seed, hash_str(bundle.front().head)));
  std::vector<std::string> parts;
  for (const Triple& t : bundle) {
    const auto& variants = templates_for(t.relation);
    parts.push_back(render_template(variants[rng.next_below(variants.size())], t));
  }
  return join(parts, " ");
}

// ---------------------------------------------------------------------------
// Grounding and gold graph

ExecTrace ground_program(const GoldenProgram& program, const TripleStore& store) {
  return execute_program(program, store);
}

EvidenceGraph build_gold_graph(const GroundedLayout& layout) {
  if (layout.hops.size() != layout.fact_of.size()) {
    throw std::invalid_argument("layout hops and fact slots differ in size");
  }
  EvidenceGraph g;
  for (size_t h = 0; h < layout.hops.size(); ++h) {
    int fact = layout.fact_of[h];
    int parent_hop = layout.hops[h].parent;
    FactId parent_fact =
        parent_hop < 0 ? kQuestionNode : layout.fact_of[parent_hop];
    if (parent_fact == fact) continue;  // merged hops share a node
    g.add_edge(parent_fact, fact);
  }
  std::vector<ConstraintViolation> violations = validate_structure(g);
  if (g.evidence_count() == 0) {
    violations.push_back({ConstraintViolation::Kind::kUnrooted, "no evidence nodes"});
  }
  if (!violations.empty()) {
    std::string msg = "gold graph violates constraints:";
    for (const auto& v : violations) msg += " " + to_string(v.kind);
    throw GraphConstraintError(msg, std::move(violations));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Distractors

DistractorInjector::DistractorInjector(const TripleStore& store) : store_(store) {
  canonical_tokens_.reserve(store.size());
  for (const Triple& t : store.triples()) {
    canonical_tokens_.push_back(tokenize(verbalize({t}, 0)));
  }
}

namespace {

int overlap(const std::vector<std::string>& a, const std::set<std::string>& b) {
  int n = 0;
  for (const std::string& tok : a) {
    if (b.count(tok)) ++n;
  }
  return n;
}

std::array<int, 3> split_three_ways(int total) {
  int base = total / 3;
  int rem = total % 3;
  std::array<int, 3> out{base, base, base};
  for (int i = 0; i < rem; ++i) ++out[i];
  return out;
}

}  // namespace

DistractorInjector::Result DistractorInjector::inject(
    const std::string& question, const std::vector<Fact>& gold_facts,
    const std::vector<QueryPattern>& patterns, const std::set<Triple>& used,
    int count, uint64_t seed) const {
  Result result;
  if (count <= 0) return result;

  std::set<Triple> taken = used;
  auto eligible = [&](const Triple& t) {
    if (taken.count(t)) return false;
    for (const QueryPattern& p : patterns) {
      if (p.matches(t)) return false;
    }
    return true;
  };

  std::set<std::string> gold_heads;
  std::map<std::string, std::set<std::string>> gold_relations_by_head;
  for (const Fact& f : gold_facts) {
    for (const Triple& t : f.provenance) {
      gold_heads.insert(t.head);
      gold_relations_by_head[t.head].insert(t.relation);
    }
  }

  std::array<int, 3> want = split_three_ways(count);
  Rng rng(derive_seed(seed, hash_str("distractors")));

  auto push = [&](const Triple& t, DistractorKind kind, int slot) {
    Fact fact;
    fact.text = verbalize({t}, derive_seed(seed, hash_str("dtext"), slot));
    fact.provenance = {t};
    fact.is_distractor = true;
    fact.distractor_kind = kind;
    result.facts.push_back(std::move(fact));
    taken.insert(t);
    ++result.category_counts[static_cast<int>(kind)];
  };

  // (a) semantic: highest token overlap with the question.
  {
    std::set<std::string> qtokens;
    for (std::string& t : tokenize(question)) qtokens.insert(std::move(t));
    std::vector<std::pair<int, size_t>> ranked;
    for (size_t i = 0; i < store_.triples().size(); ++i) {
      if (!eligible(store_.triples()[i])) continue;
      int ov = overlap(canonical_tokens_[i], qtokens);
      if (ov > 0) ranked.push_back({ov, i});
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (const auto& [ov, idx] : ranked) {
      (void)ov;
      if (result.category_counts[0] >= want[0]) break;
      if (!eligible(store_.triples()[idx])) continue;
      push(store_.triples()[idx], DistractorKind::kSemantic,
           static_cast<int>(result.facts.size()));
    }
  }

  // (b) same head as a gold triple, different relation.
  {
    std::vector<size_t> candidates;
    for (const std::string& head : gold_heads) {
      for (size_t idx : store_.by_head(head)) {
        const Triple& t = store_.triples()[idx];
        if (gold_relations_by_head[head].count(t.relation)) continue;
        if (!eligible(t)) continue;
        candidates.push_back(idx);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    rng.shuffle(candidates);
    for (size_t idx : candidates) {
      if (result.category_counts[1] >= want[1]) break;
      if (!eligible(store_.triples()[idx])) continue;
      push(store_.triples()[idx], DistractorKind::kSameHead,
           static_cast<int>(result.facts.size()));
    }
    if (result.category_counts[1] < want[1]) {
      // Not enough same-head material; the random category absorbs the rest.
      want[2] += want[1] - result.category_counts[1];
      want[1] = result.category_counts[1];
      result.backfilled = true;
    }
  }

  // (c) uniform random remainder.
  {
    std::vector<size_t> order(store_.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    for (size_t idx : order) {
      if (result.category_counts[2] >= want[2]) break;
      if (!eligible(store_.triples()[idx])) continue;
      push(store_.triples()[idx], DistractorKind::kRandom,
           static_cast<int>(result.facts.size()));
    }
  }

  if (static_cast<int>(result.facts.size()) < count) {
    throw GenerationError("store too small to fill distractor quota");
  }
  return result;
}

std::vector<const QAInstance*> GeneratedDataset::all() const {
  std::vector<const QAInstance*> out;
  for (const auto& i : train) out.push_back(&i);
  for (const auto& i : dev) out.push_back(&i);
  for (const auto& i : test) out.push_back(&i);
  return out;
}

// ---------------------------------------------------------------------------
// Program and question sampling

namespace {

struct SampledQuestion {
  GoldenProgram program;
  std::string question;
  QuestionType qtype = QuestionType::kQuery;
  // Merge adjacent same-head hops into one fact (collapses those hops to
  // a single graph node).
  bool merge_same_head = false;
};

// Entity pools derived from the relation schema of the bundled store.
struct Pools {
  std::vector<std::string> cities;       // heads of "area"
  std::vector<std::string> persons;      // heads of "hometown"
  std::vector<std::string> films;        // heads of "duration"
  std::vector<std::string> countries;    // tails of "country"
  std::vector<std::string> spoused;      // heads of "spouse"
  std::vector<std::string> laureates;    // heads of both award relations
  std::vector<std::string> fan2, fan3;   // persons starring in 2 / 3 films

  static Pools build(const TripleStore& store) {
    Pools p;
    std::set<std::string> cities, persons, films, countries, spoused, awarded,
        timed;
    std::map<std::string, int> star_counts;
    for (const Triple& t : store.triples()) {
      if (t.relation == "area") cities.insert(t.head);
      else if (t.relation == "hometown") persons.insert(t.head);
      else if (t.relation == "duration") films.insert(t.head);
      else if (t.relation == "country") countries.insert(t.tail);
      else if (t.relation == "spouse") spoused.insert(t.head);
      else if (t.relation == "award received") awarded.insert(t.head);
      else if (t.relation == "award received (point in time)") timed.insert(t.head);
      else if (t.relation == "stars") ++star_counts[t.tail];
    }
    p.cities.assign(cities.begin(), cities.end());
    p.persons.assign(persons.begin(), persons.end());
    p.films.assign(films.begin(), films.end());
    p.countries.assign(countries.begin(), countries.end());
    p.spoused.assign(spoused.begin(), spoused.end());
    for (const std::string& person : awarded) {
      if (timed.count(person)) p.laureates.push_back(person);
    }
    for (const auto& [person, n] : star_counts) {
      if (!persons.count(person)) continue;
      if (n == 2) p.fan2.push_back(person);
      if (n == 3) p.fan3.push_back(person);
    }
    return p;
  }
};

class QuestionSampler {
 public:
  QuestionSampler(const TripleStore& store, const Pools& pools)
      : store_(store), pools_(pools) {}

  SampledQuestion sample(StructureClass target, Rng& rng) const {
    switch (target) {
      case StructureClass::kScSh: return sample_sc_sh(rng);
      case StructureClass::kScMh: return sample_sc_mh(rng);
      case StructureClass::kMcSh: return sample_mc_sh(rng);
      case StructureClass::kMcMh: return sample_mc_mh(rng);
    }
    throw GenerationError("unreachable structure class");
  }

 private:
  const TripleStore& store_;
  const Pools& pools_;

  static ProgramOp find(const std::string& e) { return {OpKind::kFind, {e}}; }
  static ProgramOp relate(const std::string& r,
                          const std::string& dir = "forward") {
    return {OpKind::kRelate, {r, dir}};
  }

  std::string pick_format(Rng& rng, std::vector<std::string> variants) const {
    return variants[rng.next_below(variants.size())];
  }

  static std::string fill(std::string tmpl,
                          const std::vector<std::string>& args) {
    for (const std::string& a : args) {
      size_t pos = tmpl.find("{}");
      if (pos == std::string::npos) break;
      tmpl.replace(pos, 2, a);
    }
    return tmpl;
  }

  std::string tail_of(const std::string& head, const std::string& rel) const {
    std::vector<Triple> m = store_.forward(head, rel);
    return m.empty() ? std::string{} : m.front().tail;
  }

  SampledQuestion sc_sh_attr_query(Rng& rng) const {
    const std::string& city = rng.pick(pools_.cities);
    std::string attr = rng.next_bool(0.5) ? "area" : "population";
    SampledQuestion q;
    q.program = {find(city), relate(attr)};
    q.qtype = QuestionType::kQuery;
    q.question = fill(pick_format(rng, {"What is the {} of {}?",
                                        "Tell me the {} of {}.",
                                        "Could you give the {} of {}?"}),
                      {attr, city});
    return q;
  }

  SampledQuestion sc_sh_rel_query(Rng& rng) const {
    SampledQuestion q;
    q.qtype = QuestionType::kQuery;
    if (rng.next_bool(0.5)) {
      const std::string& film = rng.pick(pools_.films);
      q.program = {find(film), relate("director")};
      q.question = fill(pick_format(rng, {"Who directed {}?",
                                          "Who is the director of {}?"}),
                        {film});
    } else {
      const std::string& person = rng.pick(pools_.spoused);
      q.program = {find(person), relate("spouse")};
      q.question = fill(pick_format(rng, {"Who is {} married to?",
                                          "Who is the spouse of {}?"}),
                        {person});
    }
    return q;
  }

  SampledQuestion sc_sh_bool(Rng& rng) const {
    const std::string& city = rng.pick(pools_.cities);
    std::string truth = tail_of(city, "country");
    if (truth.empty()) return sc_sh_attr_query(rng);
    std::string expected = truth;
    if (rng.next_bool(0.5) && pools_.countries.size() > 1) {
      do {
        expected = rng.pick(pools_.countries);
      } while (expected == truth);
    }
    SampledQuestion q;
    q.program = {find(city), relate("country"), {OpKind::kVerifyBool, {expected}}};
    q.qtype = QuestionType::kBool;
    q.question = fill(pick_format(rng, {"Is {} located in {}?",
                                        "Does {} lie within {}?"}),
                      {city, expected});
    return q;
  }

  SampledQuestion qualifier_question(Rng& rng, bool merged) const {
    const std::string& person = rng.pick(pools_.laureates);
    SampledQuestion q;
    q.program = {find(person),
                 {OpKind::kFilterAttr, {"award received"}},
                 {OpKind::kQueryAttrQualifier, {"award received", "point in time"}}};
    q.qtype = QuestionType::kQualifier;
    q.merge_same_head = merged;
    q.question = fill(pick_format(rng, {"In which year did {} receive an award?",
                                        "When was {} given an award?"}),
                      {person});
    return q;
  }

  SampledQuestion sample_sc_sh(Rng& rng) const {
    switch (rng.next_below(4)) {
      case 0: return sc_sh_attr_query(rng);
      case 1: return sc_sh_rel_query(rng);
      case 2: return sc_sh_bool(rng);
      default: return qualifier_question(rng, /*merged=*/true);
    }
  }

  SampledQuestion sc_mh_query2(Rng& rng) const {
    const std::string& person = rng.pick(pools_.persons);
    std::string attr = rng.next_bool(0.5) ? "area" : "population";
    SampledQuestion q;
    q.program = {find(person), relate("hometown"), relate(attr)};
    q.qtype = QuestionType::kQuery;
    q.question = fill(pick_format(rng, {"What is the {} of the hometown of {}?",
                                        "Give the {} of {}'s hometown."}),
                      {attr, person});
    return q;
  }

  SampledQuestion sc_mh_query_film(Rng& rng) const {
    const std::string& film = rng.pick(pools_.films);
    SampledQuestion q;
    q.qtype = QuestionType::kQuery;
    if (rng.next_bool(0.5)) {
      q.program = {find(film), relate("director"), relate("hometown")};
      q.question = fill(pick_format(rng,
                                    {"Which city is the hometown of the director of {}?",
                                     "Where does the director of {} come from?"}),
                        {film});
    } else {
      std::string attr = rng.next_bool(0.5) ? "area" : "population";
      q.program = {find(film), relate("director"), relate("hometown"), relate(attr)};
      q.question =
          fill(pick_format(rng,
                           {"What is the {} of the hometown of the director of {}?"}),
               {attr, film});
    }
    return q;
  }

  SampledQuestion sc_mh_bool(Rng& rng) const {
    const std::string& person = rng.pick(pools_.persons);
    std::string home = tail_of(person, "hometown");
    std::string truth = home.empty() ? std::string{} : tail_of(home, "country");
    if (truth.empty()) return sc_mh_query2(rng);
    std::string expected = truth;
    if (rng.next_bool(0.5) && pools_.countries.size() > 1) {
      do {
        expected = rng.pick(pools_.countries);
      } while (expected == truth);
    }
    SampledQuestion q;
    q.program = {find(person), relate("hometown"), relate("country"),
                 {OpKind::kVerifyBool, {expected}}};
    q.qtype = QuestionType::kBool;
    q.question = fill(pick_format(rng, {"Is the hometown of {} located in {}?",
                                        "Does {} come from a city in {}?"}),
                      {person, expected});
    return q;
  }

  SampledQuestion sample_sc_mh(Rng& rng) const {
    switch (rng.next_below(4)) {
      case 0: return sc_mh_query2(rng);
      case 1: return sc_mh_query_film(rng);
      case 2: return sc_mh_bool(rng);
      default: return qualifier_question(rng, /*merged=*/false);
    }
  }

  SampledQuestion comparison(Rng& rng, bool multi_hop) const {
    std::string attr;
    std::string a, b;
    bool films = !multi_hop && rng.next_bool(0.34);
    if (films) {
      attr = "duration";
      a = rng.pick(pools_.films);
      do {
        b = rng.pick(pools_.films);
      } while (b == a);
    } else {
      attr = rng.next_bool(0.5) ? "area" : "population";
    }
    std::string cmp = rng.next_bool(0.5) ? "greater" : "less";
    std::string cmp_word = cmp == "greater" ? "larger" : "smaller";
    SampledQuestion q;
    q.qtype = QuestionType::kComparison;

    if (!multi_hop) {
      if (!films) {
        a = rng.pick(pools_.cities);
        do {
          b = rng.pick(pools_.cities);
        } while (b == a);
      }
      q.program = {find(a), relate(attr), find(b), relate(attr),
                   {OpKind::kSelectBetween, {attr, cmp}}};
      q.question = rng.next_bool(0.5)
                       ? "Which has a " + cmp_word + " " + attr + ", " + a + " or " +
                             b + "?"
                       : "Which " + attr + " is " + cmp_word + ", " + a + " or " + b +
                             "?";
      return q;
    }

    // Multi-hop: compare attributes of hometowns. A mixed shape pits one
    // hometown chain against a plain city chain.
    const std::string& p1 = rng.pick(pools_.persons);
    if (rng.next_bool(0.5)) {
      std::string p2;
      do {
        p2 = rng.pick(pools_.persons);
      } while (p2 == p1);
      q.program = {find(p1), relate("hometown"), find(p2), relate("hometown"),
                   {OpKind::kSelectBetween, {attr, cmp}}};
      q.question =
          fill(pick_format(rng,
                           {"Which city has a {} {}, the hometown of {} or the hometown of {}?",
                            "Whose hometown has the {} {}, {}'s or {}'s?"}),
               {cmp_word, attr, p1, p2});
    } else {
      const std::string& city = rng.pick(pools_.cities);
      q.program = {find(p1), relate("hometown"), find(city),
                   {OpKind::kSelectBetween, {attr, cmp}}};
      q.question = fill(
          pick_format(rng, {"Which has a {} {}, the hometown of {} or {}?"}),
          {cmp_word, attr, p1, city});
    }
    return q;
  }

  SampledQuestion count_question(Rng& rng, bool with_filter, bool merged) const {
    const std::vector<std::string>& pool =
        rng.next_bool(0.5) && !pools_.fan3.empty() ? pools_.fan3 : pools_.fan2;
    const std::string& person = rng.pick(pool);
    SampledQuestion q;
    q.qtype = QuestionType::kCount;
    if (with_filter) {
      q.program = {find(person), relate("stars", "backward"),
                   {OpKind::kFilterAttr, {"duration"}}, {OpKind::kCount, {}}};
      q.merge_same_head = merged;
      q.question = fill(
          pick_format(rng, {"How many films starring {} have a recorded duration?",
                            "How many films that star {} have a known running time?"}),
          {person});
    } else {
      q.program = {find(person), relate("stars", "backward"), {OpKind::kCount, {}}};
      q.question = fill(pick_format(rng, {"How many films star {}?",
                                          "In how many films does {} appear?"}),
                        {person});
    }
    return q;
  }

  SampledQuestion sample_mc_sh(Rng& rng) const {
    switch (rng.next_below(3)) {
      case 0: return comparison(rng, /*multi_hop=*/false);
      case 1: return count_question(rng, /*with_filter=*/false, false);
      default: return count_question(rng, /*with_filter=*/true, /*merged=*/true);
    }
  }

  SampledQuestion sample_mc_mh(Rng& rng) const {
    switch (rng.next_below(3)) {
      case 0:
      case 1: return comparison(rng, /*multi_hop=*/true);
      default: return count_question(rng, /*with_filter=*/true, /*merged=*/false);
    }
  }
};

// ---------------------------------------------------------------------------
// Instance assembly

struct FactPlan {
  std::vector<Triple> primaries;
  std::vector<int> hop_indices;
};

// Groups hops into fact slots, merging a hop into its parent's slot when
// requested and both share a head entity.
GroundedLayout plan_layout(const ExecTrace& trace, bool merge_same_head) {
  GroundedLayout layout;
  layout.hops = trace.hops;
  layout.fact_of.assign(trace.hops.size(), -1);
  int next = 0;
  for (size_t h = 0; h < trace.hops.size(); ++h) {
    int parent = trace.hops[h].parent;
    if (merge_same_head && parent >= 0 &&
        trace.hops[parent].triple.head == trace.hops[h].triple.head) {
      layout.fact_of[h] = layout.fact_of[parent];
      continue;
    }
    layout.fact_of[h] = next++;
  }
  layout.n_facts = next;
  return layout;
}

std::vector<FactPlan> fact_plans(const GroundedLayout& layout) {
  std::vector<FactPlan> plans(layout.n_facts);
  for (size_t h = 0; h < layout.hops.size(); ++h) {
    FactPlan& plan = plans[layout.fact_of[h]];
    plan.primaries.push_back(layout.hops[h].triple);
    plan.hop_indices.push_back(static_cast<int>(h));
  }
  return plans;
}

struct BuiltInstance {
  QAInstance instance;
  std::array<int, 3> distractor_counts{0, 0, 0};
  bool distractors_backfilled = false;
};

class Generator {
 public:
  Generator(const TripleStore& store, const GenConfig& cfg)
      : store_(store),
        cfg_(cfg),
        pools_(Pools::build(store)),
        sampler_(store, pools_),
        injector_(store) {
    if (pools_.cities.empty() || pools_.persons.empty() || pools_.films.empty() ||
        pools_.fan2.empty() || pools_.laureates.empty()) {
      throw GenerationError(
          "triple store lacks the relation coverage needed for generation");
    }
  }

  GeneratedDataset run() {
    std::vector<StructureClass> targets = class_quota();
    Rng order_rng(derive_seed(cfg_.rng_seed, hash_str("class-order")));
    order_rng.shuffle(targets);

    GeneratedDataset out;
    out.report.requested = cfg_.n_instances;
    std::vector<BuiltInstance> built;
    int attempts_failed = 0;
    int attempts_total = 0;

    for (int i = 0; i < cfg_.n_instances; ++i) {
      bool done = false;
      for (int retry = 0; retry < 64 && !done; ++retry) {
        ++attempts_total;
        uint64_t seed = derive_seed(cfg_.rng_seed, hash_str("instance"), i, retry);
        try {
          built.push_back(build_instance(std::to_string(i), targets[i], seed));
          done = true;
        } catch (const std::exception& e) {
          ++attempts_failed;
          if (out.report.failure_log.size() < 50) {
            out.report.failure_log.push_back(e.what());
          }
        }
      }
      if (!done) {
        throw GenerationError("could not realize instance " + std::to_string(i) +
                              " for class " + to_string(targets[i]));
      }
      if (attempts_total >= 20 &&
          static_cast<double>(attempts_failed) / attempts_total > 0.2) {
        throw GenerationError("grounding failure rate above 20%; aborting");
      }
    }

    out.report.grounding_failures = attempts_failed;
    assemble_splits(std::move(built), out);
    return out;
  }

 private:
  const TripleStore& store_;
  const GenConfig& cfg_;
  Pools pools_;
  QuestionSampler sampler_;
  DistractorInjector injector_;

  std::vector<StructureClass> class_quota() const {
    // Largest-remainder apportionment of the target mix.
    std::vector<std::pair<StructureClass, double>> shares(
        cfg_.structure_mix.begin(), cfg_.structure_mix.end());
    std::vector<StructureClass> out;
    int assigned = 0;
    std::vector<std::pair<double, size_t>> remainders;
    std::vector<int> counts(shares.size());
    for (size_t c = 0; c < shares.size(); ++c) {
      double exact = shares[c].second * cfg_.n_instances;
      counts[c] = static_cast<int>(exact);
      assigned += counts[c];
      remainders.push_back({exact - counts[c], c});
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (int i = 0; i < cfg_.n_instances - assigned; ++i) {
      ++counts[remainders[i % remainders.size()].second];
    }
    for (size_t c = 0; c < shares.size(); ++c) {
      for (int i = 0; i < counts[c]; ++i) out.push_back(shares[c].first);
    }
    return out;
  }

  BuiltInstance build_instance(const std::string& id, StructureClass target,
                               uint64_t seed) {
    Rng rng(seed);
    SampledQuestion sq = sampler_.sample(target, rng);
    ExecTrace trace = ground_program(sq.program, store_);
    if (!trace.ok) throw GenerationError("grounding failed: " + trace.error);

    GroundedLayout layout = plan_layout(trace, sq.merge_same_head);
    EvidenceGraph provisional = build_gold_graph(layout);
    if (structure_class_of(provisional) != target) {
      throw GenerationError("realized class mismatch for " + to_string(target));
    }

    // Gold facts: primaries plus 0-2 same-head padding triples that no
    // program lookup could reach.
    std::vector<FactPlan> plans = fact_plans(layout);
    std::set<Triple> used;
    for (const FactPlan& p : plans) {
      for (const Triple& t : p.primaries) used.insert(t);
    }
    std::vector<Fact> gold_facts;
    for (size_t slot = 0; slot < plans.size(); ++slot) {
      std::vector<Triple> bundle = plans[slot].primaries;
      attach_padding(bundle, trace.patterns, used, rng);
      Fact fact;
      fact.provenance = bundle;
      fact.text = verbalize(bundle, derive_seed(seed, hash_str("text"), slot));
      verify_surfaces(fact);
      gold_facts.push_back(std::move(fact));
    }

    int n_distractors = cfg_.db_size - static_cast<int>(gold_facts.size());
    if (n_distractors < 3) throw GenerationError("db_size leaves no distractor room");
    DistractorInjector::Result dist = injector_.inject(
        sq.question, gold_facts, trace.patterns, used, n_distractors,
        derive_seed(seed, hash_str("distract")));

    // Final ids: shuffle gold and distractor facts together.
    std::vector<Fact> all_facts = gold_facts;
    all_facts.insert(all_facts.end(), dist.facts.begin(), dist.facts.end());
    std::vector<size_t> order(all_facts.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    TextualDatabase db;
    std::vector<FactId> slot_to_id(all_facts.size());
    for (size_t pos = 0; pos < order.size(); ++pos) {
      Fact fact = all_facts[order[pos]];
      fact.id = static_cast<FactId>(pos);
      slot_to_id[order[pos]] = fact.id;
      db.add(std::move(fact));
    }

    EvidenceGraph gold;
    for (const Edge& e : provisional.edges()) {
      FactId u = e.first == kQuestionNode ? kQuestionNode : slot_to_id[e.first];
      gold.add_edge(u, slot_to_id[e.second]);
    }

    std::vector<ConstraintViolation> violations = validate_graph(gold, db);
    if (!violations.empty()) {
      throw GraphConstraintError("generated instance failed validation", violations);
    }

    BuiltInstance built;
    built.instance = {id,
                      sq.question,
                      trace.answer,
                      std::move(gold),
                      sq.program,
                      sq.qtype,
                      target,
                      std::move(db)};
    built.distractor_counts = dist.category_counts;
    built.distractors_backfilled = dist.backfilled;
    return built;
  }

  void attach_padding(std::vector<Triple>& bundle,
                      const std::vector<QueryPattern>& patterns,
                      std::set<Triple>& used, Rng& rng) const {
    int room = 3 - static_cast<int>(bundle.size());
    for (int k = 0; k < std::min(room, 2); ++k) {
      if (!rng.next_bool(cfg_.bundle_prob)) break;
      std::vector<size_t> candidates;
      for (size_t idx : store_.by_head(bundle.front().head)) {
        const Triple& t = store_.triples()[idx];
        if (used.count(t)) continue;
        bool forbidden = false;
        for (const QueryPattern& p : patterns) {
          if (p.matches(t)) {
            forbidden = true;
            break;
          }
        }
        if (!forbidden) candidates.push_back(idx);
      }
      if (candidates.empty()) break;
      const Triple& extra = store_.triples()[candidates[rng.next_below(candidates.size())]];
      bundle.push_back(extra);
      used.insert(extra);
    }
  }

  static void verify_surfaces(const Fact& fact) {
    for (const Triple& t : fact.provenance) {
      if (!contains(fact.text, t.head) || !contains(fact.text, t.tail)) {
        throw GenerationError("verbalization lost a surface form: " + fact.text);
      }
    }
  }

  void assemble_splits(std::vector<BuiltInstance> built, GeneratedDataset& out) {
    size_t n = built.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng split_rng(derive_seed(cfg_.rng_seed, hash_str("split")));
    split_rng.shuffle(order);

    // Largest-remainder split sizes.
    std::array<size_t, 3> sizes{};
    size_t assigned = 0;
    std::array<double, 3> exact{};
    for (int s = 0; s < 3; ++s) {
      exact[s] = cfg_.split_ratio[s] * n;
      sizes[s] = static_cast<size_t>(exact[s]);
      assigned += sizes[s];
    }
    std::vector<std::pair<double, int>> rem;
    for (int s = 0; s < 3; ++s) rem.push_back({exact[s] - sizes[s], s});
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (size_t i = 0; i < n - assigned; ++i) ++sizes[rem[i % 3].second];

    auto split_of = [&](size_t pos) {
      if (pos < sizes[0]) return 0;
      if (pos < sizes[0] + sizes[1]) return 1;
      return 2;
    };

    DistributionReport& report = out.report;
    int distractor_total = 0;
    int fact_total = 0;
    for (size_t pos = 0; pos < n; ++pos) {
      BuiltInstance& b = built[order[pos]];
      int split = split_of(pos);
      report.split_sizes[split] += 1;
      report.class_counts[b.instance.structure_class][split] += 1;
      report.question_type_counts[b.instance.question_type] += 1;
      report.distractor_counts[DistractorKind::kSemantic] += b.distractor_counts[0];
      report.distractor_counts[DistractorKind::kSameHead] += b.distractor_counts[1];
      report.distractor_counts[DistractorKind::kRandom] += b.distractor_counts[2];
      distractor_total +=
          b.distractor_counts[0] + b.distractor_counts[1] + b.distractor_counts[2];
      fact_total += static_cast<int>(b.instance.database.size());
      switch (split) {
        case 0: out.train.push_back(std::move(b.instance)); break;
        case 1: out.dev.push_back(std::move(b.instance)); break;
        default: out.test.push_back(std::move(b.instance)); break;
      }
    }
    report.emitted = static_cast<int>(n);
    report.realized_distractor_ratio =
        fact_total == 0 ? 0.0 : static_cast<double>(distractor_total) / fact_total;

    auto by_id = [](const QAInstance& a, const QAInstance& b) {
      return std::stoll(a.id) < std::stoll(b.id);
    };
    std::sort(out.train.begin(), out.train.end(), by_id);
    std::sort(out.dev.begin(), out.dev.end(), by_id);
    std::sort(out.test.begin(), out.test.end(), by_id);
  }
};

}  // namespace

GeneratedDataset generate(const TripleStore& store, const GenConfig& cfg) {
  cfg.validate();
  Generator gen(store, cfg);
  return gen.run();
}

}  // namespace graphhop
