#include "corpus_gen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "testrng.hpp"

namespace testsupport {

ZipfPicker::ZipfPicker(std::size_t n, double exponent) {
    cumulative_.reserve(n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        total += 1.0 / std::pow(double(r + 1), exponent);
        cumulative_.push_back(total);
    }
}

std::size_t ZipfPicker::sample(Rng& rng) const {
    double target = rng.unit() * cumulative_.back();
    auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), target);
    return std::size_t(it - cumulative_.begin());
}

namespace {

const char* kOnsets[] = {"b",  "c",  "d",  "f",  "g",  "h",  "l",  "m",  "n",  "p",
                         "r",  "s",  "t",  "v",  "w",  "br", "cr", "dr", "gr", "tr",
                         "st", "sl", "th", "ch", "sh", "pl", "fl", "kr", "gl", "sp"};
const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ea", "ou", "ie", "oa"};
const char* kCodas[] = {"",  "n",  "r",  "s",  "t",  "l",  "rd", "nd",
                        "st", "m",  "k",  "ln", "rn", "sk", "th", "x"};

std::string make_word(Rng& rng, std::size_t syllables) {
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
        w += kOnsets[rng.below(std::size(kOnsets))];
        w += kVowels[rng.below(std::size(kVowels))];
        if (s + 1 == syllables || rng.chance(0.3)) w += kCodas[rng.below(std::size(kCodas))];
    }
    return w;
}

std::vector<std::string> make_pool(Rng& rng, std::size_t count, std::size_t syllables,
                                   std::set<std::string>& used) {
    std::vector<std::string> pool;
    pool.reserve(count);
    while (pool.size() < count) {
        std::string w = make_word(rng, syllables);
        if (used.insert(w).second) pool.push_back(std::move(w));
    }
    return pool;
}

std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = char(w[0] - 'a' + 'A');
    return w;
}

// template atoms
enum Slot : char { kNoun = 'N', kVerb = 'V', kAdj = 'A', kName = 'M' };

struct Template {
    std::vector<std::string> parts;  // literal words or single-char slot markers
};

std::vector<Template> novel_templates() {
    auto t = [](std::initializer_list<const char*> parts) {
        Template out;
        for (const char* p : parts) out.parts.emplace_back(p);
        return out;
    };
    // pronoun-rich narrative prose: a broad layer of ubiquitous
    // function words repeats every sentence or two (the way English
    // does), while content slots draw from a flat vocabulary
    return {
        t({"he", "was", "at", "the", "N", "and", "she", "was", "with", "the", "N", "for",
           "him"}),
        t({"M", "V", "to", "the", "N", "for", "the", "N", "of", "the", "N"}),
        t({"it", "was", "the", "N", "that", "V", "his", "N", "and", "her", "N", "as", "they",
           "V"}),
        t({"she", "V", "the", "A", "N", "as", "the", "N", "V", "on", "the", "N"}),
        t({"he", "V", "a", "N", "in", "the", "N", "with", "the", "N", "for", "her"}),
        t({"the", "N", "of", "the", "N", "was", "A", "and", "it", "V", "him"}),
        t({"M", "was", "not", "at", "the", "N", "for", "she", "V", "the", "N"}),
        t({"his", "N", "V", "on", "the", "N", "and", "the", "N", "V", "in", "the", "N"}),
        t({"that", "N", "V", "her", "as", "a", "N", "of", "the", "N", "and", "his", "N"}),
        t({"she", "saw", "the", "N", "at", "the", "N", "and", "he", "V", "it"}),
        t({"it", "V", "with", "the", "N", "of", "a", "A", "N", "for", "them"}),
        t({"the", "A", "N", "was", "in", "the", "N", "and", "M", "V", "for", "it"}),
        t({"he", "and", "she", "V", "at", "the", "N", "that", "V", "the", "N"}),
        t({"a", "N", "of", "the", "N", "V", "as", "it", "was", "A", "on", "the", "N"}),
        t({"her", "N", "was", "the", "N", "of", "his", "N", "and", "it", "was", "A"}),
        t({"M", "V", "that", "the", "N", "was", "A", "for", "the", "N"}),
        t({"in", "the", "N", "he", "V", "the", "N", "with", "her", "N"}),
        t({"the", "N", "V", "for", "him", "and", "the", "N", "V", "as", "she", "V"}),
        t({"she", "was", "A", "at", "the", "N", "of", "the", "N", "and", "he", "V"}),
        t({"on", "the", "N", "a", "A", "N", "V", "with", "the", "N", "of", "M"}),
        t({"it", "was", "as", "if", "the", "N", "V", "for", "her", "N", "and", "his", "N"}),
        t({"the", "N", "and", "the", "N", "were", "with", "him", "at", "the", "N"}),
        t({"he", "V", "her", "to", "the", "N", "and", "they", "V", "the", "A", "N"}),
        t({"they", "were", "in", "the", "N", "when", "the", "N", "V", "it", "with", "him"}),
    };
}

}  // namespace

std::string generate_novel(std::uint64_t seed, std::size_t target_words) {
    Rng rng(seed);
    std::set<std::string> used = {"the", "a",   "of",   "and",  "to",   "in",   "was",
                                  "it",  "that", "he",   "she",  "his",  "her",  "him",
                                  "they", "them", "were", "with", "for",  "as",   "at",
                                  "on",  "not",  "saw",  "if",   "when"};
    Rng vocab_rng(seed ^ 0x1111);
    std::vector<std::string> nouns = make_pool(vocab_rng, 1400, 2, used);
    std::vector<std::string> verbs = make_pool(vocab_rng, 420, 2, used);
    std::vector<std::string> adjs = make_pool(vocab_rng, 320, 3, used);
    std::vector<std::string> names;
    for (std::string& w : make_pool(vocab_rng, 64, 2, used)) names.push_back(capitalize(w));

    // flat global distributions: content words recur at long gaps, the
    // way prose vocabulary does; short-range repetition comes from the
    // scene bursts below
    ZipfPicker global_noun(nouns.size(), 0.9);
    ZipfPicker global_verb(verbs.size(), 0.9);
    ZipfPicker global_adj(adjs.size(), 0.9);

    std::vector<Template> templates = novel_templates();

    std::string text;
    text.reserve(target_words * 8);
    std::size_t words = 0;
    std::size_t sentence_in_scene = 0;
    const std::size_t kSceneLen = 30;

    // a scene gives a short burst of the same few words, like a named
    // character walking through a chapter
    std::size_t scene_noun_a = 0, scene_noun_b = 0, scene_name = 0;
    auto reseed_scene = [&]() {
        scene_noun_a = rng.below(nouns.size());
        scene_noun_b = rng.below(nouns.size());
        scene_name = rng.below(names.size());
    };
    reseed_scene();

    auto draw_noun = [&]() -> const std::string& {
        if (rng.chance(0.5)) return nouns[rng.chance(0.5) ? scene_noun_a : scene_noun_b];
        return nouns[global_noun.sample(rng)];
    };
    auto draw_verb = [&]() -> const std::string& { return verbs[global_verb.sample(rng)]; };
    auto draw_adj = [&]() -> const std::string& { return adjs[global_adj.sample(rng)]; };
    auto draw_name = [&]() -> const std::string& {
        if (rng.chance(0.7)) return names[scene_name];
        return names[rng.below(names.size())];
    };

    while (words < target_words) {
        if (++sentence_in_scene > kSceneLen) {
            sentence_in_scene = 1;
            reseed_scene();
        }
        const Template& tpl = templates[rng.below(templates.size())];
        std::string sentence;
        for (std::size_t i = 0; i < tpl.parts.size(); ++i) {
            const std::string& part = tpl.parts[i];
            std::string word;
            if (part == "N") word = draw_noun();
            else if (part == "V") word = draw_verb();
            else if (part == "A") word = draw_adj();
            else if (part == "M") word = draw_name();
            else word = part;
            if (i == 0) word = capitalize(word);
            if (i) sentence += ' ';
            sentence += word;
            ++words;
        }
        double roll = rng.unit();
        sentence += roll < 0.90 ? '.' : (roll < 0.96 ? '?' : '!');
        text += sentence;
        text += rng.chance(0.15) ? "\n" : " ";
    }
    text += '\n';
    return text;
}

PlantedCorpus generate_planted_corpus(std::uint64_t seed, std::size_t episodes,
                                      std::size_t sentences_per_episode) {
    Rng rng(seed);
    std::set<std::string> used;
    Rng vocab_rng(seed ^ 0x2222);
    std::vector<std::string> background = make_pool(vocab_rng, 9000, 3, used);
    std::vector<std::string> plant_words = make_pool(vocab_rng, 3 + episodes * 3 * 3, 2, used);

    auto trigram_at = [&plant_words](std::size_t index) {
        return plant_words[index] + " " + plant_words[index + 1] + " " +
               plant_words[index + 2];
    };

    PlantedCorpus out;
    out.episodes = episodes;
    out.sentences_per_episode = sentences_per_episode;
    out.global_plant = trigram_at(0);

    const std::size_t kLen = 10;
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        std::size_t local_base = 3 + ep * 9;
        for (std::size_t s = 0; s < sentences_per_episode; ++s) {
            std::vector<std::string> slots;
            if (s % 2 == 0) {
                slots.push_back(plant_words[0]);
                slots.push_back(plant_words[1]);
                slots.push_back(plant_words[2]);
            }
            if (s % 6 == 1 || s % 6 == 3 || s % 6 == 5) {
                std::size_t base = local_base + ((s % 6) / 2) * 3;
                slots.push_back(plant_words[base]);
                slots.push_back(plant_words[base + 1]);
                slots.push_back(plant_words[base + 2]);
            }
            while (slots.size() < kLen) slots.push_back(background[rng.below(background.size())]);
            std::string sentence;
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (i) sentence += ' ';
                sentence += slots[i];
            }
            out.text += sentence;
            out.text += ".\n";
        }
    }
    return out;
}

SharedBlockPair generate_shared_block_pair(std::uint64_t seed) {
    Rng rng(seed);
    std::set<std::string> used;
    Rng vocab_rng(seed ^ 0x3333);
    std::vector<std::string> bg_a = make_pool(vocab_rng, 6000, 3, used);
    std::vector<std::string> bg_b = make_pool(vocab_rng, 6000, 3, used);
    std::vector<std::string> shared = make_pool(vocab_rng, 3, 2, used);  // one trigram
    std::vector<std::string> locals = make_pool(vocab_rng, 2 * 3 * 4 * 3, 2, used);

    SharedBlockPair out;
    out.shared_key = shared[0] + " " + shared[1] + " " + shared[2];
    out.sentences_per_leg = 120;

    const std::size_t kLegs = 3;
    const std::size_t kLen = 10;
    std::size_t local_cursor = 0;

    auto build_doc = [&](std::vector<std::string>& background) {
        std::string text;
        for (std::size_t leg = 0; leg < kLegs; ++leg) {
            // 4 local trigrams per leg, never reused
            std::size_t base = local_cursor;
            local_cursor += 12;
            for (std::size_t s = 0; s < out.sentences_per_leg; ++s) {
                std::vector<std::string> slots;
                if (s % 2 == 0) {
                    slots.push_back(shared[0]);
                    slots.push_back(shared[1]);
                    slots.push_back(shared[2]);
                }
                if (s % 6 == 1 || s % 6 == 3 || s % 6 == 5) {
                    std::size_t local = base + ((s % 6) / 2) * 3;
                    slots.push_back(locals[local]);
                    slots.push_back(locals[local + 1]);
                    slots.push_back(locals[local + 2]);
                }
                while (slots.size() < kLen)
                    slots.push_back(background[rng.below(background.size())]);
                std::string sentence;
                for (std::size_t i = 0; i < slots.size(); ++i) {
                    if (i) sentence += ' ';
                    sentence += slots[i];
                }
                text += sentence;
                text += ".\n";
            }
        }
        return text;
    };

    out.doc_a = build_doc(bg_a);
    out.doc_b = build_doc(bg_b);
    return out;
}

}  // namespace testsupport
