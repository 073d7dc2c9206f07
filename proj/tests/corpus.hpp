#pragma once

// Atom-free filters with finite L1 norm. Reference norms were computed
// offline at 30 digits (mpmath, split at every sign change).

#include <vector>

struct CorpusFilter {
    const char* source;
    double norm;
};

inline const std::vector<CorpusFilter>& atom_free_corpus()
{
    static const std::vector<CorpusFilter> c{
        {"rect(0,1)", 1.0},
        {"rect(-0.5,0.5)", 1.0},
        {"expstep(-1)", 1.0},
        {"expstep(-2)", 0.5},
        {"expstep(-0.5,3)", 1.2788427457445257},
        {"expstep(-1,0,[0,1])", 1.0},
        {"gauss(1)", 1.0},
        {"gauss(4)", 1.0},
        {"gauss(16)", 1.0},
        {"rect(0,1) - rect(1,2)", 2.0},
        {"gauss(1) - gauss(2)", 0.64534913766953728},
        {"2*rect(0,3)", 6.0},
        {"expstep(-1,2)", 0.66047354836833949},
        {"expstep(-3,0,[1,-2])", 0.21028007117707992},
        {"rect(0,2) - 0.5*gauss(1)", 2.0227501319481793},
        {"expstep(-1) - expstep(-2)", 0.5},
        {"0.5*rect(-1,1) + rect(0,2)", 3.0},
        {"expstep(-0.25,1,[1,0,-0.1])", 7.6038015854835903},
        {"-1*gauss(0.5) + rect(-1,1)", 2.2341501549039475},
        {"expstep(-2,5,[0,1])", 0.15556305815010746},
    };
    return c;
}
