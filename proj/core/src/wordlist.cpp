#include "cpc/wordlist.hpp"

#include <sstream>
#include <string>
#include <unordered_set>

namespace cpc {

namespace {

// Space-separated, lowercase. Roughly the thousand most frequent English
// lemmas plus common inflections; enough for the consistency check to pass
// ordinary prose and reject gibberish at sensible thresholds.
constexpr const char* kWords = R"(
a about above across act after again against age ago agree air all almost
alone along already also although always am among amount an and animal
animals another answer answers any anyone anything appear appeared apple
apples are area arm arms army around art as ask asked at ate away baby back
bad ball bank base be bear beautiful became because become bed bee been bees
before began begin behind being believe bell belong below beside best better
between big bird birds bit black blue board boat body book books born both
bottom box boy boys bread break bridge bright bring broke brother brought
brown build building built burn bus business but buy by call called came can
cannot capital captain car care carefully carry carried case cat cats catch
cattle caught cause cells center central century certain chance change
character charge check chief child children church circle city class clean
clear climb close cloth clothes cloud coast cold college color come common
company complete computer consider contain continue control cook cool copy
corn corner cost could count country course cover covered cow create cried
crops cross crowd current cut dance dark day days dead deal dear decide
decided deep describe desert design details developed dictionary did die
died difference different difficult dinner direct direction discover
discovered distance divide division do doctor does dog dogs dollars done
door down draw drawing dream dress drink drive drop dry during duty each
early ears earth east easy eat eaten edge effect eggs eight either electric
elements else end energy engine english enjoy enough enter entire equal
equation especially even evening ever every everyone everything exactly
example except exercise expect experience experiment explain express eye
eyes face fact factors factory fall family famous far farm farmers fast
father fear feel feeling feet fell felt few field fig fight figure fill
finally find fine fingers finish finished fire first fish fit five flat
floor flow flower flowers fly follow food foot for force forest form found
four fraction free french fresh friend friends from front fruit full fun
galaxy game garden gas gave general get girl girls give given glass go god
gold gone good got government grass great green grew ground group grow
grown guess gun had hair half hand hands happen happened happy hard has hat
have he head hear heard heart heat heavy held hello help her here high hill
him himself his history hit hold hole home honey hope horse hot hours house
how however huge human hundred hunting ice idea if important in inch
include indicate industry information insects inside instead instruments
interest interesting into iron is island it its itself job joined jumped
just keep keeps kept key killed kind king knew know known lady lake land
language large last late later laughed law lay lead learn least leave led
left legs length less let letter level lie life lifted light like likes
line list listen little live lives located long look lost lot loud love low
machine made main major make making man many map mark market match material
matter may me mean measure meat meet melody members men metal method middle
might mile milk million mind mine minutes miss modern molecules moment money
months moon more morning most mother mountain mouth move movement much music
must my name nation natural near necessary need never new next night nine no
nor north nose not note nothing notice noun now number numeral object
observe ocean of off office often oh oil old on once one only open opposite
or order other our out outside over own oxygen page paint pair paper
paragraph park part particular party pass passed past pattern pay people
per perhaps period person phrase picked picture piece place plains plan
plane planet plant plants play please plural poem point pole poor position
possible pounds power practice prepared president pretty printed probably
problem process produce products property provide pulled pushed put
question quickly quiet quite race radio rain raised ran rather reach
reached read ready really reason received record red region remain remember
repeated report represent rest result return rhythm rich ride right ring
rise river road rock rocks rolled room root rope rose round row rule run
rush safe said sail salt same sand sat save saw say scale school science
scientists score sea seat second section see seed seeds seem seen self sell
send sense sent sentence separate serve set settled seven several shall
shape sharp she ship shoes shop short should shoulder shout show shown side
sight sign signal silent similar simple since sing single sister sit six
size skin sky sleep slowly small smell smiled snow so soft soil soldiers
solution some someone something sometimes son song soon sound south space
speak special speed spell spend spoke spot spread spring square stand stars
start state statement stay steel step stick still stone stood stop store
story straight strange stream street stretched string strong students study
subject substances such suddenly suffix sugar suggested sum summer sun
supply suppose sure surface surprise syllables symbols system table tail
take talk tall teacher team tell temperature ten terms test than that the
their them themselves then there these they thing think third this those
though thought thousands three through thus tied time tiny to today
together told tone too took tools top total touch toward town track trade
train training travel tree triangle trip trouble truck true try tube turn
twenty two type under underline understand unit until up upon us use
usually valley value various verb very view village visit voice vowel wait
walk wall want war warm was wash watch water waves way we wear weather week
weight well went were west what wheels when where whether which while white
who whole whose why wide wife wild will win wind window wings winter wire
wish with within without woman women wonder wood word work workers world
would write written wrong wrote yard year yellow yes yet you young your
)";

const std::unordered_set<std::string>& word_set() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> set;
    std::istringstream stream(kWords);
    std::string word;
    while (stream >> word) set.insert(word);
    return set;
  }();
  return words;
}

}  // namespace

bool in_english_wordlist(std::string_view word) {
  return word_set().count(std::string(word)) > 0;
}

std::size_t english_wordlist_size() { return word_set().size(); }

}  // namespace cpc
