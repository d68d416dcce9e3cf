typedef int T;
void f(void)
{
    int *p = 0;
    T *q = 0;
    (void)p;
    (void)q;
}
