#pragma once

#include <map>
#include <string>
#include <vector>

#include "bratteli/premorphism.hpp"

namespace bratteli {

// Non-erasing word map between finite alphabets, extended to words by
// concatenation.
struct SadicMorphism {
    std::vector<std::string> domain_alphabet;
    std::vector<std::string> codomain_alphabet;
    std::map<std::string, std::vector<std::string>> images;

    std::vector<std::string> apply(const std::vector<std::string>& word) const;
    const std::vector<std::string>& image(const std::string& letter) const;
};

// image of v reads the sources of r^{-1}(v) in rank order
SadicMorphism extract_morphism(const Diagram& d, long long i);

// substitution composite V_j -> V_i^*
SadicMorphism compose_morphisms(const Diagram& d, long long i, long long j);

// one morphism per premorphism layer: eta_k maps W_{f_k} into V_k^*
SadicMorphism premorphism_to_eta(const Premorphism& f, long long k);
std::vector<SadicMorphism> premorphism_to_eta_sequence(const Premorphism& f, long long depth);

bool is_letter_surjective(const SadicMorphism& m);

struct RectangleReport {
    bool commutes = true;
    std::vector<std::pair<long long, std::string>> failures; // (level, domain letter)
};

// eta_{k-1} after the target window substitution equals the source level
// substitution after eta_k, on every domain letter, one period certifying all
RectangleReport check_commuting_rectangles(const Premorphism& f, long long depth);

// incidence matrix of a morphism (rows: codomain letters, cols: domain letters)
std::vector<std::vector<long long>> abelianization(const SadicMorphism& m);

// depth-k cylinder label: the rank word of a prefix plus its terminal vertex
struct CylinderLabel {
    std::vector<int> ranks;
    std::string vertex;
    bool operator==(const CylinderLabel&) const = default;
    bool operator<(const CylinderLabel& o) const;
    std::string to_string() const;
};

CylinderLabel label_of_prefix(const Diagram& d, const PathPrefix& p);
PathPrefix prefix_of_label(const Diagram& d, const CylinderLabel& l);

// maps each depth-k cylinder to its depth-(k-1) truncation
struct OneBlockCode {
    long long k = 0;
    CylinderLabel apply_letter(const Diagram& d, const CylinderLabel& l) const;
    std::vector<CylinderLabel> apply(const Diagram& d,
                                     const std::vector<CylinderLabel>& word) const;
};

OneBlockCode one_block_code(const Diagram& d, long long k);

// the t-th letter is the depth-k truncation of the t-th path into v
std::vector<CylinderLabel> tower_word(const Diagram& d, long long k, long long m,
                                      const std::string& v);

struct PipelineWitness {
    EventuallyPeriodicPath start;
    long long position = 0;
    CylinderLabel mapped;   // image of the domain letter under the block map
    CylinderLabel expected; // letter of the codomain itinerary
};

struct PipelineReport {
    bool commutes = true;
    std::vector<PipelineWitness> witnesses;
};

// Realizes the block map at index i (level-f_i cylinders to level-i cylinders
// via the induced map) and checks, on itineraries of length word_len, both the
// truncation rectangle and shift equivariance along the induced orbits.
// Starts: the min-path witnesses of the target plus the exact preimages of the
// source's max-path witnesses.
PipelineReport sliding_block_pipeline(const Premorphism& f, long long i, long long word_len,
                                      const NaturalExtensionRule& ext_b,
                                      const NaturalExtensionRule& ext_c);

} // namespace bratteli
