#pragma once

// Hand-built verdict battery shared by the unit suite and the acceptance
// gate.  Each expectation was worked out by hand from the suffix
// conditions and is cross-checked against the brute-force oracle, so a bug
// in either the table or the checker shows up as a three-way disagreement.

namespace evsync::testdata {

struct Fixture {
  const char* name;
  const char* spec;
  const char* trace;
  bool linearizable;  // at t = 0
};

inline const Fixture kFixtures[] = {
    // --- test-and-set ---
    {"tas solo winner", "tas", "inv 0 O tas\nres 0 O tas T\n", true},
    {"tas sequential winner then loser", "tas",
     "inv 0 O tas\nres 0 O tas T\ninv 1 O tas\nres 1 O tas F\n", true},
    {"tas overlapping double winner", "tas",
     "inv 0 O tas\ninv 1 O tas\nres 0 O tas T\nres 1 O tas T\n", false},
    {"tas overlapping loser first", "tas",
     "inv 0 O tas\ninv 1 O tas\nres 0 O tas F\nres 1 O tas T\n", true},
    {"tas sequential loser first", "tas",
     "inv 0 O tas\nres 0 O tas F\ninv 1 O tas\nres 1 O tas T\n", false},
    {"tas pending second wins", "tas",
     "inv 0 O tas\ninv 1 O tas\nres 1 O tas T\n", true},
    {"tas pending explains loser", "tas",
     "inv 0 O tas\ninv 1 O tas\nres 1 O tas F\n", true},
    {"tas lone loser", "tas", "inv 1 O tas\nres 1 O tas F\n", false},
    // --- register ---
    {"register write then read", "register",
     "inv 0 O write 5\nres 0 O write _\ninv 1 O read\nres 1 O read 5\n", true},
    {"register read misses earlier write", "register",
     "inv 0 O write 5\nres 0 O write _\ninv 1 O read\nres 1 O read _\n",
     false},
    {"register concurrent read may miss", "register",
     "inv 0 O write 5\ninv 1 O read\nres 1 O read _\nres 0 O write _\n", true},
    {"register concurrent read may see", "register",
     "inv 0 O write 5\ninv 1 O read\nres 1 O read 5\nres 0 O write _\n", true},
    // --- fetch-and-add ---
    {"faa overlapping in order", "faa",
     "inv 0 O faa\ninv 1 O faa\nres 0 O faa 0\nres 1 O faa 1\n", true},
    {"faa overlapping swapped", "faa",
     "inv 0 O faa\ninv 1 O faa\nres 0 O faa 1\nres 1 O faa 0\n", true},
    {"faa sequential duplicate zero", "faa",
     "inv 0 O faa\nres 0 O faa 0\ninv 1 O faa\nres 1 O faa 0\n", false},
    {"faa overlapping duplicate zero", "faa",
     "inv 0 O faa\ninv 1 O faa\nres 0 O faa 0\nres 1 O faa 0\n", false},
    {"faa skipped ticket", "faa",
     "inv 0 O faa\nres 0 O faa 0\ninv 1 O faa\nres 1 O faa 2\n", false},
    {"faa pending op supplies the gap", "faa",
     "inv 0 O faa\ninv 1 O faa\nres 1 O faa 1\n", true},
    {"faa lone one", "faa", "inv 1 O faa\nres 1 O faa 1\n", false},
    // --- consensus ---
    {"consensus sequential split", "consensus",
     "inv 0 O propose a\nres 0 O propose a\ninv 1 O propose b\n"
     "res 1 O propose b\n",
     false},
    {"consensus overlapping split", "consensus",
     "inv 0 O propose a\ninv 1 O propose b\nres 0 O propose a\n"
     "res 1 O propose b\n",
     false},
    {"consensus overlapping agreement", "consensus",
     "inv 0 O propose a\ninv 1 O propose b\nres 0 O propose b\n"
     "res 1 O propose b\n",
     true},
    {"consensus solo", "consensus", "inv 0 O propose a\nres 0 O propose a\n",
     true},
    // --- fetch-and-cons ---
    {"fac sequential chain", "fac",
     "inv 0 O fac a\nres 0 O fac []\ninv 1 O fac b\nres 1 O fac [a]\n", true},
    {"fac second misses first", "fac",
     "inv 0 O fac a\nres 0 O fac []\ninv 1 O fac b\nres 1 O fac []\n", false},
    {"fac overlapping either order", "fac",
     "inv 0 O fac a\ninv 1 O fac b\nres 0 O fac [b]\nres 1 O fac []\n", true},
    {"fac mutual sighting", "fac",
     "inv 0 O fac a\ninv 1 O fac b\nres 0 O fac [b]\nres 1 O fac [a]\n",
     false},
};

}  // namespace evsync::testdata
